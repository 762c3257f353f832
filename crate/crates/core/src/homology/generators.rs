use std::collections::BTreeMap;

use super::table::HomologyTable;
use crate::error::Result;
use crate::exactla::{Echelon, Matrix, SparseVec};
use crate::symtree::{OperadElement, SigmaModuleGraded, SigmaSlot};

/// Homology classes that are not composites of lower-arity classes.
#[derive(Clone, Debug)]
pub struct GeneratorReport {
    /// The indecomposable quotient, slot by slot, with its Σ-action.
    pub module: SigmaModuleGraded,
    /// Representatives of a basis of each indecomposable quotient.
    pub representatives: BTreeMap<(usize, i32), Vec<OperadElement>>,
    /// Dimension of the decomposable subspace of each slot.
    pub decomposable: BTreeMap<(usize, i32), usize>,
}

impl GeneratorReport {
    pub fn nonzero(&self) -> Vec<(usize, i32, usize)> {
        self.module.nonzero()
    }
}

/// For each slot of arity at least two, homology modulo the span of `x ∘_i y` over classes of
/// lower arity (closed under the Σ-action).
pub fn minimal_homology_generators(t: &HomologyTable) -> Result<GeneratorReport> {
    let field = t.field;
    let sig = &t.signature;
    let mut report = GeneratorReport {
        module: SigmaModuleGraded::default(),
        representatives: BTreeMap::new(),
        decomposable: BTreeMap::new(),
    };
    for (&(n, d), slot) in &t.slots {
        // the unit is not a generator
        if n < 2 || slot.dim() == 0 {
            continue;
        }
        let mut dec = Echelon::new(field);
        let mut queue: Vec<SparseVec> = Vec::new();
        let lower = if n >= 3 { t.slots.range((2, i32::MIN)..(n, i32::MIN)) } else { t.slots.range((0, 0)..(0, 0)) };
        for (&(k, e), x) in lower {
            let m = n + 1 - k;
            if m < 2 || x.dim() == 0 {
                continue;
            }
            let Some(y) = t.slot(m, d - e) else { continue };
            for xr in &x.representatives {
                for yr in &y.representatives {
                    for i in 1..=k {
                        let c = slot.class_coords(&xr.compose(i, yr, sig)?)?;
                        if !c.is_zero() && dec.insert(&c) {
                            queue.push(c);
                        }
                    }
                }
            }
        }
        // Σ-closure
        let mats = &slot.action.transpositions;
        while let Some(v) = queue.pop() {
            for m in mats {
                let w = apply(m, &v);
                if dec.insert(&w) {
                    queue.push(w);
                }
            }
        }
        report.decomposable.insert((n, d), dec.rank());
        let complement: Vec<usize> = (0..slot.dim()).filter(|c| !dec.is_pivot(*c)).collect();
        let pos: BTreeMap<usize, usize> = complement.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let quotient_mats: Vec<Matrix> = mats
            .iter()
            .map(|m| {
                let cols: Vec<SparseVec> = complement
                    .iter()
                    .map(|&c| dec.reduce(&apply(m, &SparseVec::unit(c, field))).remap(|j| pos[&j]))
                    .collect();
                Matrix::from_columns(field, complement.len(), &cols)
            })
            .collect();
        report.module.insert(SigmaSlot {
            arity: n,
            degree: d,
            labels: complement.iter().map(|&c| slot.action.labels[c].clone()).collect(),
            transpositions: quotient_mats,
        });
        report.representatives.insert(
            (n, d),
            complement.iter().map(|&c| slot.representatives[c].clone()).collect(),
        );
    }
    Ok(report)
}

pub(crate) fn apply(m: &Matrix, v: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (j, c) in v.entries() {
        out = out.axpy(c, &m.column_sparse(*j));
    }
    out
}

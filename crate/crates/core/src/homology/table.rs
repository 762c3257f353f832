use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use crate::dgoperad::{BasisOrder, Presentation, Slot, TruncatedOperad};
use crate::error::{Error, Result};
use crate::exactla::{Echelon, Field, Matrix, Scalar, SparseVec};
use crate::symtree::{OperadElement, Perm, Signature, SigmaSlot};

/// Homology of one `(arity, degree)` slot.
#[derive(Clone, Debug)]
pub struct HomologySlot {
    pub arity: usize,
    pub degree: i32,
    pub chain_dim: usize,
    pub cycle_dim: usize,
    pub boundary_rank: usize,
    /// Cycles whose classes form a basis of homology.
    pub representatives: Vec<OperadElement>,
    /// Action of the adjacent transpositions on the class basis.
    pub action: SigmaSlot,
    chain: Arc<Slot>,
    d_out: Arc<Vec<SparseVec>>,
    classes: Echelon,
}

/// Outcome of locating a cycle in homology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassMatch {
    /// Coordinates in the class basis (nonzero).
    Class(SparseVec),
    Boundary,
}

impl HomologySlot {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Chain slot this homology is computed from.
    pub fn chain(&self) -> &Slot {
        &self.chain
    }

    /// Class coordinates of a cycle given in quotient chain coordinates.
    pub fn classify(&self, v: &SparseVec) -> Result<ClassMatch> {
        let field = self.classes.field();
        let mut dv = SparseVec::new();
        for (i, c) in v.entries() {
            dv = dv.axpy(c, &self.d_out[*i]);
        }
        if !dv.is_zero() {
            return Err(Error::NotACycle(format!(
                "element of slot ({}, {}) has nonzero boundary",
                self.arity, self.degree
            )));
        }
        let red = self.classes.reduce_tagged(v, &SparseVec::new());
        if !red.residue.is_zero() {
            return Err(Error::Internal("cycle outside the span of classes and boundaries".into()));
        }
        let coords = red.tag.scale(&field.one().neg());
        Ok(if coords.is_zero() {
            ClassMatch::Boundary
        } else {
            ClassMatch::Class(coords)
        })
    }

    /// Class coordinates of an element (zero vector for boundaries).
    pub fn class_coords(&self, e: &OperadElement) -> Result<SparseVec> {
        let v = self.chain.coords(e)?;
        Ok(match self.classify(&v)? {
            ClassMatch::Class(c) => c,
            ClassMatch::Boundary => SparseVec::new(),
        })
    }
}

/// Homology dimensions, representatives and Σ-actions up to a maximal arity.
#[derive(Clone, Debug)]
pub struct HomologyTable {
    pub field: Field,
    pub planar: bool,
    pub max_arity: usize,
    pub signature: Signature,
    pub slots: BTreeMap<(usize, i32), HomologySlot>,
}

impl HomologyTable {
    pub fn dim(&self, n: usize, d: i32) -> usize {
        self.slots.get(&(n, d)).map_or(0, HomologySlot::dim)
    }

    pub fn slot(&self, n: usize, d: i32) -> Option<&HomologySlot> {
        self.slots.get(&(n, d))
    }

    /// Nonzero slots as `(arity, degree, dim)`.
    pub fn nonzero(&self) -> Vec<(usize, i32, usize)> {
        self.slots
            .values()
            .filter(|s| s.dim() > 0)
            .map(|s| (s.arity, s.degree, s.dim()))
            .collect()
    }

    /// `(arity, degree) -> dim` for every computed slot.
    pub fn dims(&self) -> BTreeMap<(usize, i32), usize> {
        self.slots.iter().map(|(k, s)| (*k, s.dim())).collect()
    }

    /// Tab-separated `arity degree dim` lines for every computed slot.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("arity\tdegree\tdim\n");
        for s in self.slots.values() {
            out.push_str(&format!("{}\t{}\t{}\n", s.arity, s.degree, s.dim()));
        }
        out
    }

    pub fn to_json(&self, with_representatives: bool) -> serde_json::Value {
        let slots: Vec<_> = self
            .slots
            .values()
            .map(|s| {
                let mut v = json!({
                    "arity": s.arity,
                    "degree": s.degree,
                    "dim": s.dim(),
                    "chain_dim": s.chain_dim,
                });
                if with_representatives {
                    v["representatives"] = json!(s
                        .representatives
                        .iter()
                        .map(|r| r.format(&self.signature))
                        .collect::<Vec<_>>());
                }
                v
            })
            .collect();
        json!({ "field": self.field.to_string(), "max_arity": self.max_arity, "slots": slots })
    }

    /// Locates `candidate` in homology: class coordinates or `Boundary`;
    /// `NotACycle` if its differential is nonzero.
    pub fn representative_match(&self, candidate: &OperadElement) -> Result<ClassMatch> {
        let n = candidate.arity();
        let d = match candidate.degree(&self.signature) {
            Some(d) => d,
            None if candidate.is_zero() => return Ok(ClassMatch::Boundary),
            None => return Err(Error::DegreeMismatch("inhomogeneous candidate".into())),
        };
        if n > self.max_arity {
            return Err(Error::Invalid(format!("arity {n} beyond the table (max {})", self.max_arity)));
        }
        let Some(slot) = self.slots.get(&(n, d)) else {
            // empty chain group
            return Ok(ClassMatch::Boundary);
        };
        slot.classify(&slot.chain.coords(candidate)?)
    }
}

/// Homology of `p` in arities `1..=max_arity`.
pub fn homology_table(p: &Presentation, max_arity: usize) -> Result<HomologyTable> {
    homology_table_ordered(p, max_arity, BasisOrder::Canonical)
}

/// As [`homology_table`], with a chosen column order of the tree basis.
pub fn homology_table_ordered(p: &Presentation, max_arity: usize, order: BasisOrder) -> Result<HomologyTable> {
    let mut op = TruncatedOperad::with_order(p, order);
    homology_of(&mut op, max_arity)
}

/// Homology of an already constructed truncation.
pub fn homology_of(op: &mut TruncatedOperad, max_arity: usize) -> Result<HomologyTable> {
    homology_in_arities(op, 1, max_arity)
}

/// Homology of the slots with arity in `lo..=hi` only.
pub fn homology_in_arities(op: &mut TruncatedOperad, lo: usize, hi: usize) -> Result<HomologyTable> {
    let max_arity = hi;
    let field = op.field();
    let sig = op.signature().clone();
    let planar = op.presentation().planar;
    let mut jobs = Vec::new();
    for n in lo..=hi {
        for d in op.degrees(n) {
            let slot = op.slot(n, d);
            let d_out = op.differential(n, d);
            let d_in = op.differential(n, d + 1);
            jobs.push((n, d, slot, d_out, d_in));
        }
    }
    let computed: Vec<Result<HomologySlot>> = jobs
        .into_par_iter()
        .map(|(n, d, slot, d_out, d_in)| slot_homology(n, d, slot, d_out, &d_in, &sig, field, planar))
        .collect();
    let mut slots = BTreeMap::new();
    for s in computed {
        let s = s?;
        slots.insert((s.arity, s.degree), s);
    }
    Ok(HomologyTable {
        field,
        planar,
        max_arity,
        signature: sig,
        slots,
    })
}

#[allow(clippy::too_many_arguments)]
fn slot_homology(
    n: usize,
    d: i32,
    chain: Arc<Slot>,
    d_out: Arc<Vec<SparseVec>>,
    d_in: &[SparseVec],
    sig: &Signature,
    field: Field,
    planar: bool,
) -> Result<HomologySlot> {
    let dim = chain.dim();
    // kernel of d_out: dependencies among the images of unit vectors
    let mut ker = Vec::new();
    let mut image_out = Echelon::new(field);
    for (j, col) in d_out.iter().enumerate() {
        if let Some(rel) = image_out.insert_tagged(col, &SparseVec::unit(j, field)) {
            ker.push(rel);
        }
    }
    let mut classes = Echelon::new(field);
    for col in d_in {
        classes.insert(col);
    }
    let boundary_rank = classes.rank();
    let mut reps = Vec::new();
    for k in &ker {
        let idx = reps.len();
        if classes.insert_tagged(k, &SparseVec::unit(idx, field)).is_none() {
            reps.push(k.clone());
        }
    }
    let representatives: Vec<OperadElement> = reps.iter().map(|v| chain.element(v, field)).collect();
    let mut out = HomologySlot {
        arity: n,
        degree: d,
        chain_dim: dim,
        cycle_dim: ker.len(),
        boundary_rank,
        representatives,
        action: SigmaSlot {
            arity: n,
            degree: d,
            labels: Vec::new(),
            transpositions: Vec::new(),
        },
        chain,
        d_out,
        classes,
    };
    out.action.labels = out.representatives.iter().map(|r| r.format(sig)).collect();
    if !planar && out.dim() > 0 {
        let mut mats = Vec::with_capacity(n.saturating_sub(1));
        for i in 1..n {
            let s = Perm::transposition(n, i, i + 1);
            let cols: Vec<SparseVec> = out
                .representatives
                .iter()
                .map(|r| out.class_coords(&r.act(&s, sig)?))
                .collect::<Result<_>>()?;
            mats.push(Matrix::from_columns(field, out.dim(), &cols));
        }
        out.action.transpositions = mats;
    }
    Ok(out)
}

/// Matrix of the map induced on homology by a generator-wise morphism
/// `f` from the source presentation to the target one, at slot `(n, d)`.
pub fn homology_map(
    src: &HomologyTable,
    dst: &HomologyTable,
    f: &impl Fn(crate::symtree::GenId) -> Option<OperadElement>,
    n: usize,
    d: i32,
) -> Result<Matrix> {
    let field = src.field;
    let rows = dst.dim(n, d);
    let Some(s) = src.slot(n, d) else {
        return Ok(Matrix::zeros(field, rows, 0));
    };
    let mut cols = Vec::with_capacity(s.dim());
    for r in &s.representatives {
        let image = r.map_generators(f, &src.signature, &dst.signature);
        let c = match dst.slot(n, d) {
            Some(t) => t.class_coords(&image)?,
            None => SparseVec::new(),
        };
        cols.push(c);
    }
    Ok(Matrix::from_columns(field, rows, &cols))
}

/// Trace of the action of `σ` on a slot (its character value).
pub fn character(slot: &SigmaSlot, sigma: &Perm) -> Result<Scalar> {
    let m = slot.action(sigma)?;
    let mut t = m.field().zero();
    for i in 0..m.rows() {
        t = t.add(m.get(i, i));
    }
    Ok(t)
}

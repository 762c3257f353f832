use std::collections::BTreeMap;

use crate::dgoperad::{lu_generating, Presentation, TruncatedOperad};
use crate::error::{Error, Result};
use crate::exactla::{Echelon, Matrix, SparseVec};
use crate::symtree::{GenId, OperadElement, Perm, SigmaModuleGraded, SigmaSlot};

/// Minimal generators of `s(ker ∂ ∩ ker p)` for `p: ch⟨sG⟩ → lu_G(𝒪)`,
/// with `G` all declared generators of `p`.
pub fn relation_module(p: &Presentation, max_arity: usize) -> Result<SigmaModuleGraded> {
    let gens: Vec<GenId> = p.signature().ids().collect();
    relation_module_for(p, &gens, max_arity)
}

/// As [`relation_module`] for an explicit generating set.
///
/// `K = ker ∂ ∩ ker p` is computed slotwise inside the free operad
/// `⟨G ⊕ sG⟩` with `d(sg) = g`; `ker p` is the ideal generated by the
/// relations. A slot's generators are `K(n)` modulo the ideal generated by
/// `K` in lower arities, reported one degree up.
pub fn relation_module_for(p: &Presentation, gens: &[GenId], max_arity: usize) -> Result<SigmaModuleGraded> {
    if p.has_differential() {
        return Err(Error::Invalid("relation module needs an operad without differential".into()));
    }
    let field = p.field;
    let lu = lu_generating(p, gens)?;
    let free = lu.without_relations();
    let sig = lu.signature().clone();
    let mut lu_op = TruncatedOperad::new(&lu);
    let mut free_op = TruncatedOperad::new(&free);
    let mut lower: Vec<OperadElement> = Vec::new();
    let mut out = SigmaModuleGraded::default();
    for n in 2..=max_arity {
        let decomposables = free.with_relations(lower.clone())?;
        let mut dec_op = TruncatedOperad::new(&decomposables);
        let mut found = Vec::new();
        for d in free_op.degrees(n) {
            let ideal_slot = lu_op.slot(n, d);
            let free_slot = free_op.slot(n, d);
            debug_assert_eq!(ideal_slot.free_trees(), free_slot.free_trees());
            let diff = free_op.differential(n, d);
            // K(n, d): combinations of ideal vectors killed by ∂
            let ideal = ideal_slot.ideal_span(field).columns_sparse();
            let mut img = Echelon::new(field);
            let mut kernel = Vec::new();
            for (i, v) in ideal.iter().enumerate() {
                let mut dv = SparseVec::new();
                for (j, c) in v.entries() {
                    dv = dv.axpy(c, &diff[*j]);
                }
                if let Some(a) = img.insert_tagged(&dv, &SparseVec::unit(i, field)) {
                    let mut k = SparseVec::new();
                    for (j, c) in a.entries() {
                        k = k.axpy(c, &ideal[*j]);
                    }
                    kernel.push(k);
                }
            }
            if kernel.is_empty() {
                continue;
            }
            for k in &kernel {
                found.push(free_slot.free_element(k, field));
            }
            // K(n, d) modulo the ideal generated by lower K
            let dec_slot = dec_op.slot(n, d);
            let mut quot = Echelon::new(field);
            let mut chosen = Vec::new();
            for k in &kernel {
                let r = dec_slot.reduce_modulo_ideal(k);
                let idx = chosen.len();
                if quot.insert_tagged(&r, &SparseVec::unit(idx, field)).is_none() {
                    chosen.push(k.clone());
                }
            }
            if chosen.is_empty() {
                continue;
            }
            let mut mats = Vec::new();
            if !p.planar {
                for i in 1..n {
                    let s = Perm::transposition(n, i, i + 1);
                    let mut cols = Vec::with_capacity(chosen.len());
                    for k in &chosen {
                        let moved = free_slot.free_element(k, field).act(&s, &sig)?;
                        let r = dec_slot.reduce_modulo_ideal(&free_slot.free_coords(&moved)?);
                        let red = quot.reduce_tagged(&r, &SparseVec::new());
                        if !red.residue.is_zero() {
                            return Err(Error::Internal("relation kernel is not Σ-stable".into()));
                        }
                        cols.push(red.tag.scale(&field.one().neg()));
                    }
                    mats.push(Matrix::from_columns(field, chosen.len(), &cols));
                }
            }
            out.insert(SigmaSlot {
                arity: n,
                degree: d + 1,
                labels: chosen
                    .iter()
                    .map(|k| format!("s({})", free_slot.free_element(k, field).format(&sig)))
                    .collect(),
                transpositions: mats,
            });
        }
        lower.extend(found);
    }
    Ok(out)
}

/// Dimensions of a graded Σ-module keyed by slot.
pub fn module_dims(m: &SigmaModuleGraded) -> BTreeMap<(usize, i32), usize> {
    m.slots.iter().map(|(k, s)| (*k, s.dim())).collect()
}

//! Arity-truncated components of a presented dg operad.
//!
//! For each `(arity, degree)` slot the free component is enumerated, the
//! relation ideal is spanned by grafting every relation into every position
//! of every tree (a marker generator stands in for the relation during
//! enumeration), and the quotient basis is the set of non-pivot trees of the
//! ideal's echelon form.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use super::presentation::Presentation;
use crate::error::{Error, Result};
use crate::exactla::{Echelon, Field, Matrix, Scalar, SparseVec};
use crate::symtree::{
    substitute_node, GenId, GeneratorSymbol, OperadElement, Perm, Signature, Symmetry, Tree, TreeEnumerator,
};

/// Column order of the free tree basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BasisOrder {
    #[default]
    Canonical,
    Reversed,
}

/// One `(arity, degree)` slot of the quotient operad.
#[derive(Clone, Debug)]
pub struct Slot {
    pub arity: usize,
    pub degree: i32,
    free: Vec<Tree>,
    free_index: HashMap<Tree, usize>,
    ideal: Echelon,
    basis: Vec<usize>,
    basis_pos: HashMap<usize, usize>,
}

impl Slot {
    fn new(arity: usize, degree: i32, free: Vec<Tree>, ideal: Echelon) -> Slot {
        let free_index = free.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let basis: Vec<usize> = (0..free.len()).filter(|c| !ideal.is_pivot(*c)).collect();
        let basis_pos = basis.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        Slot {
            arity,
            degree,
            free,
            free_index,
            ideal,
            basis,
            basis_pos,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn free_dim(&self) -> usize {
        self.free.len()
    }

    pub fn ideal_rank(&self) -> usize {
        self.ideal.rank()
    }

    pub fn free_trees(&self) -> &[Tree] {
        &self.free
    }

    /// Trees representing the quotient basis.
    pub fn basis_trees(&self) -> impl Iterator<Item = &Tree> + '_ {
        self.basis.iter().map(move |&c| &self.free[c])
    }

    pub fn basis_tree(&self, i: usize) -> &Tree {
        &self.free[self.basis[i]]
    }

    /// Coordinates of an element in the free basis of this slot.
    pub fn free_coords(&self, e: &OperadElement) -> Result<SparseVec> {
        let mut pairs = Vec::with_capacity(e.len());
        for (t, c) in e.terms() {
            let Some(&i) = self.free_index.get(t) else {
                return Err(Error::Internal(format!(
                    "tree outside slot ({}, {})",
                    self.arity, self.degree
                )));
            };
            pairs.push((i, c.clone()));
        }
        Ok(SparseVec::from_pairs(pairs))
    }

    /// Coordinates of the class of `e` in the quotient basis.
    pub fn coords(&self, e: &OperadElement) -> Result<SparseVec> {
        Ok(self.reduce_free(&self.free_coords(e)?))
    }

    /// Quotient coordinates of a vector given in free coordinates.
    pub fn reduce_free(&self, v: &SparseVec) -> SparseVec {
        self.ideal.reduce(v).remap(|c| self.basis_pos[&c])
    }

    /// True if a vector in free coordinates lies in the relation ideal.
    pub fn ideal_contains(&self, v: &SparseVec) -> bool {
        self.ideal.contains(v)
    }

    /// Reduces a free-coordinate vector modulo the ideal, staying in free coordinates.
    pub fn reduce_modulo_ideal(&self, v: &SparseVec) -> SparseVec {
        self.ideal.reduce(v)
    }

    /// True if `e` lies in the relation ideal.
    pub fn in_ideal(&self, e: &OperadElement) -> Result<bool> {
        Ok(self.ideal.contains(&self.free_coords(e)?))
    }

    /// Element with the given quotient coordinates, written on basis trees.
    pub fn element(&self, coords: &SparseVec, field: Field) -> OperadElement {
        let mut e = OperadElement::zero(field, self.arity);
        for (i, c) in coords.entries() {
            e.add_canonical(self.basis_tree(*i).clone(), c.clone());
        }
        e
    }

    pub fn free_element(&self, coords: &SparseVec, field: Field) -> OperadElement {
        let mut e = OperadElement::zero(field, self.arity);
        for (i, c) in coords.entries() {
            e.add_canonical(self.free[*i].clone(), c.clone());
        }
        e
    }

    /// Columns spanning the ideal inside the free component.
    pub fn ideal_span(&self, field: Field) -> Matrix {
        // u_c - reduce(u_c) lies in the ideal and is 1 at pivot c, 0 at the others.
        let cols: Vec<SparseVec> = (0..self.free.len())
            .filter(|c| self.ideal.is_pivot(*c))
            .map(|c| {
                let u = SparseVec::unit(c, field);
                let r = self.ideal.reduce(&u);
                u.axpy(&field.one().neg(), &r)
            })
            .collect();
        Matrix::from_columns(field, self.free.len(), &cols)
    }
}

/// Public view of one slot with its outgoing differential.
#[derive(Clone, Debug)]
pub struct TruncatedComponent {
    pub arity: usize,
    pub degree: i32,
    pub basis: Vec<Tree>,
    pub free_dim: usize,
    pub ideal_rank: usize,
    /// Columns: images of the basis under `d`, in the basis of `(arity, degree - 1)`.
    pub differential: Vec<SparseVec>,
    pub target_dim: usize,
}

impl TruncatedComponent {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn differential_matrix(&self, field: Field) -> Matrix {
        Matrix::from_columns(field, self.target_dim, &self.differential)
    }
}

/// Lazily computed arity truncation of a presentation.
#[derive(Debug)]
pub struct TruncatedOperad {
    pres: Presentation,
    order: BasisOrder,
    free_enum: TreeEnumerator,
    ideal_sig: Signature,
    ideal_enum: TreeEnumerator,
    slots: HashMap<usize, BTreeMap<i32, Arc<Slot>>>,
    diffs: HashMap<(usize, i32), Arc<Vec<SparseVec>>>,
}

impl TruncatedOperad {
    pub fn new(pres: &Presentation) -> TruncatedOperad {
        TruncatedOperad::with_order(pres, BasisOrder::Canonical)
    }

    pub fn with_order(pres: &Presentation, order: BasisOrder) -> TruncatedOperad {
        let sig = pres.signature().clone();
        let mut ideal_sig = sig.clone();
        for (j, r) in pres.relations().iter().enumerate() {
            let deg = r.degree(&sig).expect("relations are homogeneous");
            ideal_sig
                .push_marker(GeneratorSymbol::new(format!("#rel{j}"), r.arity().max(2), deg, Symmetry::None))
                .expect("fresh marker name");
        }
        TruncatedOperad {
            free_enum: TreeEnumerator::new(sig, pres.planar),
            ideal_enum: TreeEnumerator::with_markers(ideal_sig.clone(), pres.planar, 1),
            ideal_sig,
            pres: pres.clone(),
            order,
            slots: HashMap::new(),
            diffs: HashMap::new(),
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn signature(&self) -> &Signature {
        self.pres.signature()
    }

    pub fn field(&self) -> Field {
        self.pres.field
    }

    /// Builds every degree slot of arity `n`.
    pub fn ensure_arity(&mut self, n: usize) {
        if self.slots.contains_key(&n) {
            return;
        }
        let mut free = self.free_enum.by_degree(n, 0);
        if self.order == BasisOrder::Reversed {
            free.values_mut().for_each(|v| v.reverse());
        }
        let mut markers: BTreeMap<i32, Vec<Tree>> = BTreeMap::new();
        if !self.pres.relations().is_empty() && n >= 2 {
            markers = self.ideal_enum.by_degree(n, 1);
        }
        let field = self.field();
        let sig = self.pres.signature();
        let ideal_sig = &self.ideal_sig;
        let relations = self.pres.relations();
        let built: Vec<(i32, Slot)> = free
            .into_par_iter()
            .map(|(d, trees)| {
                let empty = Vec::new();
                let marked = markers.get(&d).unwrap_or(&empty);
                let slot = build_slot(n, d, trees, marked, relations, sig, ideal_sig, field);
                (d, slot)
            })
            .collect();
        let map = built.into_iter().map(|(d, s)| (d, Arc::new(s))).collect();
        self.slots.insert(n, map);
    }

    /// Degrees with a nonempty free component in arity `n`.
    pub fn degrees(&mut self, n: usize) -> Vec<i32> {
        self.ensure_arity(n);
        self.slots[&n].keys().copied().collect()
    }

    pub fn slot(&mut self, n: usize, d: i32) -> Arc<Slot> {
        self.ensure_arity(n);
        match self.slots[&n].get(&d) {
            Some(s) => s.clone(),
            None => Arc::new(Slot::new(n, d, Vec::new(), Echelon::new(self.field()))),
        }
    }

    pub fn dim(&mut self, n: usize, d: i32) -> usize {
        self.slot(n, d).dim()
    }

    /// Differential `(n, d) -> (n, d - 1)` as columns in quotient coordinates.
    pub fn differential(&mut self, n: usize, d: i32) -> Arc<Vec<SparseVec>> {
        if let Some(m) = self.diffs.get(&(n, d)) {
            return m.clone();
        }
        let src = self.slot(n, d);
        let dst = self.slot(n, d - 1);
        let pres = &self.pres;
        let field = pres.field;
        let cols: Vec<SparseVec> = if pres.has_differential() {
            src.basis
                .par_iter()
                .map(|&c| {
                    let e = single(&src.free[c], field);
                    let de = pres.apply_differential(&e);
                    dst.coords(&de).expect("differential preserves arity and lowers degree")
                })
                .collect()
        } else {
            vec![SparseVec::new(); src.dim()]
        };
        let cols = Arc::new(cols);
        self.diffs.insert((n, d), cols.clone());
        cols
    }

    /// Quotient coordinates of a homogeneous element of arity `n`.
    pub fn coords(&mut self, e: &OperadElement) -> Result<(i32, SparseVec)> {
        let n = e.arity();
        let Some(d) = e.degree(self.signature()) else {
            if e.is_zero() {
                return Ok((0, SparseVec::new()));
            }
            return Err(Error::DegreeMismatch("inhomogeneous element".into()));
        };
        let slot = self.slot(n, d);
        Ok((d, slot.coords(e)?))
    }

    /// Reduces `e` to its normal form on quotient basis trees.
    pub fn normal_form(&mut self, e: &OperadElement) -> Result<OperadElement> {
        let mut out = OperadElement::zero(e.field(), e.arity());
        for (d, part) in e.homogeneous_parts(self.signature()) {
            let slot = self.slot(e.arity(), d);
            let nf = slot.element(&slot.coords(&part)?, e.field());
            out = out.add(&nf)?;
        }
        Ok(out)
    }

    pub fn is_zero_in_quotient(&mut self, e: &OperadElement) -> Result<bool> {
        Ok(self.normal_form(e)?.is_zero())
    }

    pub fn component(&mut self, n: usize, d: i32) -> TruncatedComponent {
        let slot = self.slot(n, d);
        let target_dim = self.dim(n, d - 1);
        let diff = self.differential(n, d);
        TruncatedComponent {
            arity: n,
            degree: d,
            basis: slot.basis_trees().cloned().collect(),
            free_dim: slot.free_dim(),
            ideal_rank: slot.ideal_rank(),
            differential: (*diff).clone(),
            target_dim,
        }
    }

    /// Checks, for arities up to `max_arity`, that `d` sends relations into
    /// the ideal, respects generator symmetries, and squares to zero.
    pub fn verify_differential(&mut self, max_arity: usize) -> Result<()> {
        if !self.pres.has_differential() {
            return Ok(());
        }
        let sig = self.signature().clone();
        for r in self.pres.relations().to_vec() {
            if r.arity() > max_arity {
                continue;
            }
            let dr = self.pres.apply_differential(&r);
            if !self.is_zero_in_quotient(&dr)? {
                return Err(Error::Invalid(format!(
                    "d({}) is not in the relation ideal",
                    r.format(&sig)
                )));
            }
        }
        for (g, image) in self.pres.differential_map().clone() {
            let gen = sig.get(g).clone();
            if symmetry_defect(self, gen.symmetry, gen.arity, &image)? {
                return Err(Error::Invalid(format!(
                    "d({}) does not have the symmetry of the generator",
                    gen.name
                )));
            }
        }
        for n in 1..=max_arity {
            for d in self.degrees(n) {
                let d1 = self.differential(n, d);
                let d2 = self.differential(n, d - 1);
                for col in d1.iter() {
                    let mut acc = SparseVec::new();
                    for (i, c) in col.entries() {
                        acc = acc.axpy(c, &d2[*i]);
                    }
                    if !acc.is_zero() {
                        return Err(Error::Invalid(format!(
                            "d∘d ≠ 0 on slot ({n}, {d})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// True when `image` fails to transform like a generator of the given
/// arity and symmetry, i.e. `image·σ ≠ ε(σ)·image` modulo the ideal for a
/// permutation `σ` fixing the corolla up to the sign `ε(σ)`.
pub(crate) fn symmetry_defect(
    op: &mut TruncatedOperad,
    symmetry: Symmetry,
    arity: usize,
    image: &OperadElement,
) -> Result<bool> {
    let perms: Vec<Perm> = match symmetry {
        Symmetry::None => return Ok(false),
        Symmetry::Symmetric | Symmetry::Antisymmetric => {
            (1..arity).map(|i| Perm::transposition(arity, i, i + 1)).collect()
        }
        Symmetry::Cyclic => vec![Perm::long_cycle(arity)],
    };
    let sig = op.signature().clone();
    let field = op.field();
    // A throwaway signature holding one generator with this symmetry gives
    // the sign by which σ acts on the corolla.
    let probe = Signature::from_generators([GeneratorSymbol::new("g", arity, 0, symmetry)])?;
    let corolla = OperadElement::generator(GenId(0), field, &probe);
    for sigma in perms {
        let moved = corolla.act(&sigma, &probe)?;
        let eps = moved.coefficient(&Tree::corolla(GenId(0), arity)).cloned().unwrap_or(field.zero());
        let diff = image.act(&sigma, &sig)?.sub(&image.scale(&eps))?;
        if !op.is_zero_in_quotient(&diff)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn single(t: &Tree, field: Field) -> OperadElement {
    let mut e = OperadElement::zero(field, t.arity());
    e.add_canonical(t.clone(), field.one());
    e
}

#[allow(clippy::too_many_arguments)]
fn build_slot(
    n: usize,
    d: i32,
    trees: Vec<Tree>,
    marked: &[Tree],
    relations: &[OperadElement],
    sig: &Signature,
    ideal_sig: &Signature,
    field: Field,
) -> Slot {
    let index: HashMap<&Tree, usize> = trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut ideal = Echelon::new(field);
    for m in marked {
        let gens = m.preorder();
        let Some(pos) = gens.iter().position(|g| ideal_sig.is_marker(*g)) else {
            continue;
        };
        let rel = &relations[(gens[pos].0 as usize) - sig.len()];
        let mut pairs: Vec<(usize, Scalar)> = Vec::new();
        for (rt, rc) in rel.terms() {
            let (t, s) = substitute_node(m, pos, rt, ideal_sig);
            if let Some((c, s2)) = t.canonicalize(sig) {
                let col = index[&c];
                pairs.push((col, rc.signed(s * s2)));
            }
        }
        let v = SparseVec::from_pairs(pairs);
        if !v.is_zero() {
            ideal.insert(&v);
        }
        if ideal.rank() == trees.len() {
            break;
        }
    }
    Slot::new(n, d, trees, ideal)
}

/// Span of the relation ideal inside the free component `(n, d)`.
pub fn ideal_component(p: &Presentation, n: usize, d: i32) -> Matrix {
    let mut op = TruncatedOperad::new(p);
    op.slot(n, d).ideal_span(p.field)
}

/// Basis of the quotient component `(n, d)` with its differential.
pub fn component_basis(p: &Presentation, n: usize, d: i32) -> TruncatedComponent {
    TruncatedOperad::new(p).component(n, d)
}

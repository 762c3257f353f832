use std::collections::BTreeMap;

use super::complex::FiniteChainComplex;
use crate::error::{Error, Result};
use crate::exactla::{Field, Scalar, SparseVec};
use crate::symtree::{koszul_sign, GenId, OperadElement, Perm, Signature, Symmetry, Tree};

/// Multilinear map `C^{⊗n} → C` of fixed degree, stored on basis tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearMap {
    pub field: Field,
    pub arity: usize,
    pub degree: i32,
    entries: BTreeMap<Vec<usize>, SparseVec>,
}

impl MultilinearMap {
    pub fn zero(field: Field, arity: usize, degree: i32) -> Self {
        MultilinearMap {
            field,
            arity,
            degree,
            entries: BTreeMap::new(),
        }
    }

    /// Sets the value on a basis tuple, checking the degree shift.
    pub fn set(&mut self, c: &FiniteChainComplex, inputs: Vec<usize>, value: SparseVec) -> Result<()> {
        if inputs.len() != self.arity {
            return Err(Error::ArityMismatch(format!(
                "{} inputs for an arity {} map",
                inputs.len(),
                self.arity
            )));
        }
        let deg: i32 = inputs.iter().map(|&i| c.degree(i)).sum::<i32>() + self.degree;
        if let Some(d) = c.vector_degree(&value)? {
            if d != deg {
                return Err(Error::DegreeMismatch(format!(
                    "value of degree {d} where degree {deg} is required"
                )));
            }
        }
        if value.is_zero() {
            self.entries.remove(&inputs);
        } else {
            self.entries.insert(inputs, value);
        }
        Ok(())
    }

    pub fn add_entry(&mut self, inputs: Vec<usize>, value: &SparseVec, coef: &Scalar) {
        let cur = self.entries.remove(&inputs).unwrap_or_default();
        let next = cur.axpy(coef, value);
        if !next.is_zero() {
            self.entries.insert(inputs, next);
        }
    }

    pub fn get(&self, inputs: &[usize]) -> Option<&SparseVec> {
        self.entries.get(inputs)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &SparseVec)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = MultilinearMap::zero(self.field, self.arity, self.degree);
        for (k, v) in &self.entries {
            out.add_entry(k.clone(), v, s);
        }
        out
    }

    pub fn add(&self, other: &MultilinearMap) -> Result<Self> {
        if self.arity != other.arity || (self.degree != other.degree && !self.is_zero() && !other.is_zero()) {
            return Err(Error::SizeMismatch("adding maps of different shape".into()));
        }
        let mut out = self.clone();
        if out.is_zero() {
            out.degree = other.degree;
        }
        for (k, v) in &other.entries {
            out.add_entry(k.clone(), v, &self.field.one());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultilinearMap) -> Result<Self> {
        self.add(&other.scale(&self.field.one().neg()))
    }

    /// Value on homogeneous input vectors, expanded multilinearly.
    pub fn apply(&self, inputs: &[SparseVec]) -> SparseVec {
        let mut out = SparseVec::new();
        expand(inputs, &mut |idx, coef| {
            if let Some(v) = self.entries.get(idx) {
                out = out.axpy(coef, v);
            }
        });
        out
    }
}

/// Calls `f(tuple, coef)` for every basis tuple in the expansion of
/// `v_1 ⊗ ... ⊗ v_n`.
pub(crate) fn expand(inputs: &[SparseVec], f: &mut impl FnMut(&[usize], &Scalar)) {
    fn rec(inputs: &[SparseVec], k: usize, idx: &mut Vec<usize>, coef: Option<Scalar>, f: &mut impl FnMut(&[usize], &Scalar)) {
        if k == inputs.len() {
            if let Some(c) = coef {
                f(idx, &c);
            }
            return;
        }
        for (i, c) in inputs[k].entries() {
            idx.push(*i);
            let next = match &coef {
                Some(a) => a.mul(c),
                None => c.clone(),
            };
            rec(inputs, k + 1, idx, Some(next), f);
            idx.pop();
        }
    }
    if inputs.is_empty() {
        return;
    }
    rec(inputs, 0, &mut Vec::with_capacity(inputs.len()), None, f);
}

fn parity_sign(p: i32) -> i32 {
    if p.rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

/// `∂f = d∘f − (−1)^{|f|} f∘d_⊗`, where `d_⊗` carries the Koszul sign of the
/// inputs it passes.
pub fn end_differential(c: &FiniteChainComplex, f: &MultilinearMap) -> MultilinearMap {
    let field = c.field;
    let mut out = MultilinearMap::zero(field, f.arity, f.degree - 1);
    let pre = c.d_preimages();
    for (x, v) in f.entries() {
        let dv = c.apply_d(v);
        if !dv.is_zero() {
            out.add_entry(x.clone(), &dv, &field.one());
        }
        // f(d_⊗ y) picks up f(x) whenever y differs from x in one slot i
        // with d(y_i) ∋ x_i
        let mut before = 0;
        for i in 0..x.len() {
            for (j, coef) in &pre[x[i]] {
                let mut y = x.clone();
                y[i] = *j;
                let s = -parity_sign(f.degree) * parity_sign(before);
                out.add_entry(y, v, &coef.signed(s));
            }
            before += c.degree(x[i]);
        }
    }
    out
}

/// Evaluates trees of an operad on `C`, given a map for each generator.
pub struct Evaluator<'a> {
    pub complex: &'a FiniteChainComplex,
    pub signature: &'a Signature,
    pub maps: &'a BTreeMap<GenId, MultilinearMap>,
}

impl Evaluator<'_> {
    /// `T(x_1, ..., x_n)` on basis elements. Inputs are first reordered to
    /// the planar leaf order (Koszul sign of the inputs), then each node is
    /// applied after its children, which pass the inputs to their left.
    pub fn tree_on_basis(&self, t: &Tree, inputs: &[usize]) -> Result<SparseVec> {
        let leaves = t.leaves();
        if leaves.len() != inputs.len() {
            return Err(Error::ArityMismatch(format!(
                "{} inputs for a tree of arity {}",
                inputs.len(),
                leaves.len()
            )));
        }
        let items: Vec<(usize, i32)> = leaves.iter().map(|&l| (l, self.complex.degree(inputs[l - 1]))).collect();
        let sign = koszul_sign(&items);
        let planar: Vec<usize> = leaves.iter().map(|&l| inputs[l - 1]).collect();
        let mut pos = 0;
        let v = self.planar(t, &planar, &mut pos)?;
        Ok(if sign < 0 { v.scale(&self.complex.field.one().neg()) } else { v })
    }

    fn planar(&self, t: &Tree, inputs: &[usize], pos: &mut usize) -> Result<SparseVec> {
        match t {
            Tree::Leaf(_) => {
                let v = SparseVec::unit(inputs[*pos], self.complex.field);
                *pos += 1;
                Ok(v)
            }
            Tree::Node(g, children) => {
                let map = self
                    .maps
                    .get(g)
                    .ok_or_else(|| Error::UnknownGenerator(self.signature.get(*g).name.clone()))?;
                let mut vals = Vec::with_capacity(children.len());
                let mut passed = 0;
                let mut sign = 1;
                for ch in children.iter() {
                    let start = *pos;
                    sign *= parity_sign(ch.degree(self.signature) * passed);
                    let v = self.planar(ch, inputs, pos)?;
                    passed += inputs[start..*pos].iter().map(|&i| self.complex.degree(i)).sum::<i32>();
                    vals.push(v);
                }
                let out = map.apply(&vals);
                Ok(if sign < 0 { out.scale(&self.complex.field.one().neg()) } else { out })
            }
        }
    }

    /// `e(v_1, ..., v_n)` on vectors.
    pub fn element_on(&self, e: &OperadElement, inputs: &[SparseVec]) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        let mut err = None;
        for (t, c) in e.terms() {
            expand(inputs, &mut |idx, coef| {
                if err.is_some() {
                    return;
                }
                match self.tree_on_basis(t, idx) {
                    Ok(v) => out = out.axpy(&c.mul(coef), &v),
                    Err(e) => err = Some(e),
                }
            });
        }
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// The map of a single (not necessarily canonical) tree.
    pub fn tree_map(&self, t: &Tree) -> Result<MultilinearMap> {
        let degree = t.degree(self.signature);
        let mut out = MultilinearMap::zero(self.complex.field, t.arity(), degree);
        for idx in tuples(self.complex.dim(), t.arity()) {
            let v = self.tree_on_basis(t, &idx)?;
            if !v.is_zero() {
                out.entries.insert(idx, v);
            }
        }
        Ok(out)
    }

    /// The whole map `C^{⊗n} → C` of a homogeneous element.
    pub fn element_map(&self, e: &OperadElement) -> Result<MultilinearMap> {
        let n = e.arity();
        let degree = e.degree(self.signature).unwrap_or(0);
        let mut out = MultilinearMap::zero(self.complex.field, n, degree);
        let top = self.complex.degrees().last().copied().unwrap_or(0);
        for idx in tuples(self.complex.dim(), n) {
            let deg: i32 = idx.iter().map(|&i| self.complex.degree(i)).sum::<i32>() + degree;
            if deg < 0 || deg > top {
                continue;
            }
            let mut v = SparseVec::new();
            for (t, c) in e.terms() {
                v = v.axpy(c, &self.tree_on_basis(t, &idx)?);
            }
            if !v.is_zero() {
                out.entries.insert(idx, v);
            }
        }
        Ok(out)
    }
}

/// All tuples in `{0..dim}^n`, lexicographic.
pub(crate) fn tuples(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * dim);
        for t in &out {
            for i in 0..dim {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// The permutations under which a generator of the given symmetry is
/// invariant up to the returned character value.
pub(crate) fn symmetry_group(sym: Symmetry, n: usize) -> Vec<(Perm, i32)> {
    match sym {
        Symmetry::None => vec![(Perm::identity(n), 1)],
        Symmetry::Symmetric => Perm::all(n).into_iter().map(|p| (p, 1)).collect(),
        Symmetry::Antisymmetric => Perm::all(n).into_iter().map(|p| {
            let s = p.sign();
            (p, s)
        }).collect(),
        Symmetry::Cyclic => {
            let c = Perm::long_cycle(n);
            let mut out = vec![(Perm::identity(n), 1)];
            for _ in 1..n {
                let next = out.last().unwrap().0.compose(&c);
                out.push((next, 1));
            }
            out
        }
    }
}

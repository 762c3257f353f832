use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::Value;

use super::complex::{as_label, json_scalar, ChainHomology, FiniteChainComplex};
use super::multilinear::{end_differential, symmetry_group, tuples, Evaluator, MultilinearMap};
use crate::dgoperad::{Presentation, TruncatedOperad};
use crate::error::{Error, Result};
use crate::exactla::{Echelon, SparseVec};
use crate::symtree::{GenId, OperadElement, Tree};

/// An algebra over a degree-zero presented operad on a finite complex.
#[derive(Clone, Debug)]
pub struct AlgebraStructure {
    pub operad: Presentation,
    pub complex: FiniteChainComplex,
    pub maps: BTreeMap<GenId, MultilinearMap>,
}

/// Column order used when solving for a lift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotOrder {
    #[default]
    Forward,
    Reverse,
}

impl AlgebraStructure {
    /// Checks that every map is a degree-zero chain map with the symmetry
    /// of its generator and that all relations evaluate to zero.
    pub fn new(operad: Presentation, complex: FiniteChainComplex, maps: BTreeMap<GenId, MultilinearMap>) -> Result<Self> {
        if operad.has_differential() {
            return Err(Error::Invalid("algebra structures need an operad without differential".into()));
        }
        let sig = operad.signature().clone();
        for (id, g) in sig.generators() {
            if g.degree != 0 {
                return Err(Error::DegreeMismatch(format!("generator `{}` is not of degree 0", g.name)));
            }
            let m = maps
                .get(&id)
                .ok_or_else(|| Error::Invalid(format!("no map given for `{}`", g.name)))?;
            if m.arity != g.arity || m.degree != 0 {
                return Err(Error::ArityMismatch(format!("map for `{}` has the wrong shape", g.name)));
            }
            if !end_differential(&complex, m).is_zero() {
                return Err(Error::NotACycle(format!("map for `{}` is not a chain map", g.name)));
            }
        }
        let a = AlgebraStructure { operad, complex, maps };
        let ev = a.evaluator(&a.maps);
        for (id, g) in sig.generators() {
            let corolla = Tree::corolla(id, g.arity);
            for (perm, chi) in symmetry_group(g.symmetry, g.arity) {
                let lhs = ev.tree_map(&corolla.relabel(&|l| perm.apply(l)))?;
                let rhs = a.maps[&id].scale(&a.complex.field.one().signed(chi));
                if lhs != rhs {
                    return Err(Error::Invalid(format!("map for `{}` lacks the generator's symmetry", g.name)));
                }
            }
        }
        for (k, r) in a.operad.relations().iter().enumerate() {
            if !ev.element_map(r)?.is_zero() {
                return Err(Error::Invalid(format!("relation {} does not hold on the complex", k + 1)));
            }
        }
        Ok(a)
    }

    /// Reads the `algebra` section of the complex JSON: for each generator
    /// name a list of `[out, in_1, ..., in_n, coef]`.
    pub fn from_json(operad: Presentation, value: &Value) -> Result<Self> {
        let complex = FiniteChainComplex::from_json(value)?;
        let field = complex.field;
        if field != operad.field {
            return Err(Error::FieldMismatch);
        }
        let sig = operad.signature().clone();
        let mut maps = BTreeMap::new();
        for id in sig.ids() {
            maps.insert(id, MultilinearMap::zero(field, sig.arity(id), 0));
        }
        let label = |v: &Value| -> Result<usize> {
            let l = as_label(v)?;
            complex.index(&l).ok_or_else(|| Error::Invalid(format!("unknown cell `{l}`")))
        };
        if let Some(alg) = value.get("algebra") {
            let obj = alg
                .as_object()
                .ok_or_else(|| Error::Invalid("`algebra` must be an object".into()))?;
            for (name, rows) in obj {
                let id = sig.lookup(name)?;
                let n = sig.arity(id);
                let rows = rows
                    .as_array()
                    .ok_or_else(|| Error::Invalid(format!("entries for `{name}` must be a list")))?;
                for row in rows {
                    let row = row
                        .as_array()
                        .filter(|r| r.len() == n + 2)
                        .ok_or_else(|| Error::Invalid(format!("`{name}` entries are [out, in_1..in_{n}, coef]")))?;
                    let out = label(&row[0])?;
                    let inputs: Vec<usize> = row[1..=n].iter().map(label).collect::<Result<_>>()?;
                    let coef = json_scalar(&row[n + 1], field)?;
                    let deg: i32 = inputs.iter().map(|&i| complex.degree(i)).sum();
                    if complex.degree(out) != deg {
                        return Err(Error::DegreeMismatch(format!("`{name}` entry does not preserve degree")));
                    }
                    let m = maps.get_mut(&id).expect("initialised");
                    m.add_entry(inputs, &SparseVec::unit(out, field), &coef);
                }
            }
        }
        AlgebraStructure::new(operad, complex, maps)
    }

    pub fn evaluator<'a>(&'a self, maps: &'a BTreeMap<GenId, MultilinearMap>) -> Evaluator<'a> {
        Evaluator {
            complex: &self.complex,
            signature: self.operad.signature(),
            maps,
        }
    }

    /// True iff every generator sends tensors of cycle representatives to
    /// boundaries.
    pub fn trivial_on_homology(&self) -> Result<bool> {
        let h = self.complex.homology();
        for m in self.maps.values() {
            for idx in tuples(h.dim(), m.arity) {
                let inputs: Vec<SparseVec> = idx.iter().map(|&i| h.representatives[i].clone()).collect();
                let v = m.apply(&inputs);
                if !h.class_of(&v)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Solves `∂h_g = α(g)` for every generator; lifts of generators with a
    /// symmetry are projected onto the matching isotypic part.
    pub fn lift(&self, order: PivotOrder) -> Result<Lift> {
        let sig = self.operad.signature().clone();
        let jobs: Vec<(GenId, &MultilinearMap)> = self.maps.iter().map(|(k, v)| (*k, v)).collect();
        let solved: Vec<Result<(GenId, MultilinearMap)>> = jobs
            .into_par_iter()
            .map(|(id, m)| {
                let h = solve_lift(&self.complex, m, order)
                    .map_err(|e| match e {
                        Error::NoSolution(_) => Error::NoSolution(format!(
                            "`{}` is not trivial on homology",
                            sig.get(id).name
                        )),
                        other => other,
                    })?;
                Ok((id, self.symmetrize(id, h)?))
            })
            .collect();
        let mut maps = BTreeMap::new();
        for s in solved {
            let (id, h) = s?;
            maps.insert(id, h);
        }
        Ok(Lift { maps, order })
    }

    fn symmetrize(&self, id: GenId, h: MultilinearMap) -> Result<MultilinearMap> {
        let sig = self.operad.signature();
        let g = sig.get(id);
        let group = symmetry_group(g.symmetry, g.arity);
        if group.len() == 1 {
            return Ok(h);
        }
        let field = self.complex.field;
        let order = group.len() as i64;
        if field.characteristic() != 0 && order % field.characteristic() as i64 == 0 {
            return Err(Error::Unsupported(format!(
                "lifting `{}` needs |group| invertible in the field",
                g.name
            )));
        }
        let single: BTreeMap<GenId, MultilinearMap> = [(id, h.clone())].into_iter().collect();
        let ev = self.evaluator(&single);
        let corolla = Tree::corolla(id, g.arity);
        let mut acc = MultilinearMap::zero(field, h.arity, h.degree);
        for (perm, chi) in group {
            let mut m = ev.tree_map(&corolla.relabel(&|l| perm.apply(l)))?;
            m.degree = h.degree;
            acc = acc.add(&m.scale(&field.one().signed(chi)))?;
        }
        Ok(acc.scale(&field.from_i64(order).inv()))
    }

    /// Maps for an operad built from this one by adjoining lifts: each
    /// generator `x` of `lu` with `d(x)` equal to a generator corolla `g` of
    /// the algebra's operad goes to `h_g`, the others go to `α`.
    pub fn realize(&self, lu: &Presentation, lift: &Lift) -> Result<Realization> {
        let base = self.operad.signature();
        let sig = lu.signature();
        let mut maps = BTreeMap::new();
        for (id, g) in sig.generators() {
            if let Some(dx) = lu.d_of(id) {
                let (t, c) = match dx.terms().collect::<Vec<_>>().as_slice() {
                    [(t, c)] => ((*t).clone(), (*c).clone()),
                    _ => return Err(Error::Unsupported(format!("d({}) is not a single generator", g.name))),
                };
                let target = match &t {
                    Tree::Node(h, kids) if kids.iter().all(Tree::is_leaf) && t.is_planar_ordered() => *h,
                    _ => return Err(Error::Unsupported(format!("d({}) is not a generator", g.name))),
                };
                let name = &sig.get(target).name;
                let bid = base
                    .find(name)
                    .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
                let h = lift
                    .maps
                    .get(&bid)
                    .ok_or_else(|| Error::Invalid(format!("no lift for `{name}`")))?;
                maps.insert(id, h.scale(&c.inv()));
            } else {
                let bid = base
                    .find(&g.name)
                    .ok_or_else(|| Error::UnknownGenerator(g.name.clone()))?;
                maps.insert(id, self.maps[&bid].clone());
            }
        }
        let r = Realization {
            complex: self.complex.clone(),
            operad: lu.clone(),
            maps,
            homology: self.complex.homology(),
        };
        // the assignment must be a dg map on generators
        let ev = r.evaluator();
        for id in sig.ids() {
            if let Some(dx) = lu.d_of(id) {
                let lhs = end_differential(&r.complex, &r.maps[&id]);
                let rhs = ev.element_map(&dx)?;
                if lhs != rhs {
                    return Err(Error::Internal(format!("lift of `{}` does not bound", sig.get(id).name)));
                }
            }
        }
        Ok(r)
    }
}

/// Solutions `h_g` of `∂h_g = α(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    pub maps: BTreeMap<GenId, MultilinearMap>,
    pub order: PivotOrder,
}

/// Coordinates of the degree-`k` arity-`n` maps: `(tuple, output)` pairs.
struct EndBasis {
    index: BTreeMap<(Vec<usize>, usize), usize>,
    cells: Vec<(Vec<usize>, usize)>,
}

impl EndBasis {
    fn new(c: &FiniteChainComplex, n: usize, k: i32) -> Self {
        let mut index = BTreeMap::new();
        let mut cells = Vec::new();
        for t in tuples(c.dim(), n) {
            let deg: i32 = t.iter().map(|&i| c.degree(i)).sum::<i32>() + k;
            for out in 0..c.dim() {
                if c.degree(out) == deg {
                    index.insert((t.clone(), out), cells.len());
                    cells.push((t.clone(), out));
                }
            }
        }
        EndBasis { index, cells }
    }

    fn len(&self) -> usize {
        self.cells.len()
    }

    fn coords(&self, m: &MultilinearMap) -> Result<SparseVec> {
        let mut pairs = Vec::new();
        for (t, v) in m.entries() {
            for (out, c) in v.entries() {
                let i = self
                    .index
                    .get(&(t.clone(), *out))
                    .ok_or_else(|| Error::DegreeMismatch("map outside its degree".into()))?;
                pairs.push((*i, c.clone()));
            }
        }
        Ok(SparseVec::from_pairs(pairs))
    }

    fn unit_map(&self, c: &FiniteChainComplex, i: usize, n: usize, k: i32) -> MultilinearMap {
        let (t, out) = &self.cells[i];
        let mut m = MultilinearMap::zero(c.field, n, k);
        m.add_entry(t.clone(), &SparseVec::unit(*out, c.field), &c.field.one());
        m
    }

    fn map_of(&self, c: &FiniteChainComplex, v: &SparseVec, n: usize, k: i32) -> MultilinearMap {
        let mut m = MultilinearMap::zero(c.field, n, k);
        for (i, coef) in v.entries() {
            let (t, out) = &self.cells[*i];
            m.add_entry(t.clone(), &SparseVec::unit(*out, c.field), coef);
        }
        m
    }
}

/// Columns of `∂: End_k(n) → End_{k-1}(n)` in the coordinates above.
fn differential_columns(c: &FiniteChainComplex, src: &EndBasis, dst: &EndBasis, n: usize, k: i32) -> Result<Vec<SparseVec>> {
    (0..src.len())
        .map(|i| dst.coords(&end_differential(c, &src.unit_map(c, i, n, k))))
        .collect()
}

fn solve_lift(c: &FiniteChainComplex, target: &MultilinearMap, order: PivotOrder) -> Result<MultilinearMap> {
    let n = target.arity;
    let k = target.degree + 1;
    let src = EndBasis::new(c, n, k);
    let dst = EndBasis::new(c, n, target.degree);
    let cols = differential_columns(c, &src, &dst, n, k)?;
    let mut ech = Echelon::new(c.field);
    let positions: Vec<usize> = match order {
        PivotOrder::Forward => (0..cols.len()).collect(),
        PivotOrder::Reverse => (0..cols.len()).rev().collect(),
    };
    for &i in &positions {
        ech.insert_tagged(&cols[i], &SparseVec::unit(i, c.field));
    }
    let b = dst.coords(target)?;
    let red = ech.reduce_tagged(&b, &SparseVec::new());
    if !red.residue.is_zero() {
        return Err(Error::NoSolution("target is not a boundary in End".into()));
    }
    let x = red.tag.scale(&c.field.one().neg());
    Ok(src.map_of(c, &x, n, k))
}

/// Whether `H_1` of the arity-`n` endomorphism complex vanishes, with its
/// dimension.
pub fn h1_end_dim(c: &FiniteChainComplex, n: usize) -> Result<usize> {
    let e0 = EndBasis::new(c, n, 0);
    let e1 = EndBasis::new(c, n, 1);
    let e2 = EndBasis::new(c, n, 2);
    let rank = |cols: Vec<SparseVec>| {
        let mut ech = Echelon::new(c.field);
        for v in &cols {
            ech.insert(v);
        }
        ech.rank()
    };
    let r1 = rank(differential_columns(c, &e1, &e0, n, 1)?);
    let r2 = rank(differential_columns(c, &e2, &e1, n, 2)?);
    Ok(e1.len() - r1 - r2)
}

pub fn h1_end_vanishes(c: &FiniteChainComplex, n: usize) -> Result<bool> {
    Ok(h1_end_dim(c, n)? == 0)
}

/// Generator-wise assignment of an operad with differential into `End(C)`
/// that commutes with the differentials.
#[derive(Clone, Debug)]
pub struct Realization {
    pub complex: FiniteChainComplex,
    pub operad: Presentation,
    pub maps: BTreeMap<GenId, MultilinearMap>,
    pub homology: ChainHomology,
}

impl Realization {
    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator {
            complex: &self.complex,
            signature: self.operad.signature(),
            maps: &self.maps,
        }
    }

    /// Class in `H_*C` of `e(x_1, ..., x_n)` for a cycle `e` of the operad
    /// and cycles `x_i`.
    pub fn induced_operation(&self, e: &OperadElement, inputs: &[SparseVec]) -> Result<SparseVec> {
        if e.arity() != inputs.len() {
            return Err(Error::ArityMismatch(format!(
                "{} inputs for an operation of arity {}",
                inputs.len(),
                e.arity()
            )));
        }
        self.check_cycle(e)?;
        self.evaluate_class(e, inputs)
    }

    /// Rejects elements whose differential is nonzero in the operad.
    fn check_cycle(&self, e: &OperadElement) -> Result<()> {
        let de = self.operad.apply_differential(e);
        if !TruncatedOperad::new(&self.operad).is_zero_in_quotient(&de)? {
            return Err(Error::NotACycle(format!(
                "{} is not a cycle",
                e.format(self.operad.signature())
            )));
        }
        Ok(())
    }

    fn evaluate_class(&self, e: &OperadElement, inputs: &[SparseVec]) -> Result<SparseVec> {
        for x in inputs {
            self.complex.vector_degree(x)?;
            if !self.homology.is_cycle(x) {
                return Err(Error::NotACycle(format!("input {} is not a cycle", self.complex.format_vector(x))));
            }
        }
        let v = self.evaluator().element_on(e, inputs)?;
        self.homology.class_of(&v)
    }

    /// The induced operation on class coordinates of the inputs.
    pub fn on_classes(&self, e: &OperadElement, classes: &[SparseVec]) -> Result<SparseVec> {
        let inputs: Vec<SparseVec> = classes.iter().map(|c| self.homology.cycle(c)).collect();
        self.induced_operation(e, &inputs)
    }

    /// Matrix of the induced operation on all tuples of homology basis
    /// classes: `tuple -> class coordinates` (zero values omitted).
    pub fn operation_table(&self, e: &OperadElement) -> Result<BTreeMap<Vec<usize>, SparseVec>> {
        self.check_cycle(e)?;
        let h = &self.homology;
        let mut out = BTreeMap::new();
        for idx in tuples(h.dim(), e.arity()) {
            let inputs: Vec<SparseVec> = idx.iter().map(|&i| h.representatives[i].clone()).collect();
            let v = self.evaluate_class(e, &inputs)?;
            if !v.is_zero() {
                out.insert(idx, v);
            }
        }
        Ok(out)
    }
}

//! Sparse vectors and an incremental echelon basis.
//!
//! Every operad component is handled as a subspace of a coordinate space
//! indexed by tree-basis positions. [`Echelon`] keeps rows whose pivot is
//! their smallest column; reducing a vector scans it left to right, so the
//! fully reduced vector is supported on non-pivot columns only and serves as
//! a normal form modulo the span.

use std::collections::HashMap;

use super::scalar::{Field, Scalar};

/// Sorted list of `(column, nonzero coefficient)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(col: usize, field: Field) -> SparseVec {
        SparseVec {
            entries: vec![(col, field.one())],
        }
    }

    /// Builds a vector from unsorted pairs, summing duplicates and dropping zeros.
    pub fn from_pairs(mut pairs: Vec<(usize, Scalar)>) -> SparseVec {
        pairs.sort_by_key(|(c, _)| *c);
        let mut entries: Vec<(usize, Scalar)> = Vec::with_capacity(pairs.len());
        for (c, v) in pairs {
            match entries.last_mut() {
                Some((lc, lv)) if *lc == c => *lv = lv.add(&v),
                _ => entries.push((c, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        SparseVec { entries }
    }

    pub fn from_dense(values: &[Scalar]) -> SparseVec {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); len];
        for (c, v) in &self.entries {
            out[*c] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, col: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&col, |(c, _)| *c)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn leading(&self) -> Option<&(usize, Scalar)> {
        self.entries.first()
    }

    pub fn scale(&self, s: &Scalar) -> SparseVec {
        if s.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(c, v)| (*c, v.mul(s))).collect(),
        }
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: &Scalar, other: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, b[j].1.mul(s)));
                j += 1;
            } else {
                let v = a[i].1.add(&b[j].1.mul(s));
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            Some((_, v)) => self.axpy(&v.field().one(), other),
            None => self.clone(),
        }
    }

    pub fn remap(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().map(|(c, v)| (f(*c), v.clone())).collect())
    }
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    tag: SparseVec,
}

/// Incremental row-echelon basis with optional combination tracking.
///
/// Each inserted vector may carry a `tag` (a sparse vector over caller-chosen
/// labels). Tags follow the same row operations as the vectors, so after
/// reduction the accumulated tag records which inserted vectors were used.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    rows: Vec<Row>,
    by_pivot: HashMap<usize, usize>,
}

/// Outcome of reducing a vector against an [`Echelon`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Fully reduced vector, supported on non-pivot columns.
    pub residue: SparseVec,
    /// Tag accumulated: `original = residue + Σ (coefficient * row)`, tracked through tags.
    pub tag: SparseVec,
}

impl Echelon {
    pub fn new(field: Field) -> Echelon {
        Echelon {
            field,
            rows: Vec::new(),
            by_pivot: HashMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.by_pivot.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.vec.entries[0].0)
    }

    /// Reduces `v` with tag `tag`; the result satisfies
    /// `v - residue = Σ c_r row_r` and the returned tag is `tag - Σ c_r tag_r`.
    pub fn reduce_tagged(&self, v: &SparseVec, tag: &SparseVec) -> Reduction {
        let mut cur = v.clone();
        let mut tag = tag.clone();
        let mut pos = 0;
        while pos < cur.entries.len() {
            let (col, coef) = cur.entries[pos].clone();
            match self.by_pivot.get(&col) {
                Some(&r) => {
                    let row = &self.rows[r];
                    let s = coef.neg();
                    cur = cur.axpy(&s, &row.vec);
                    if !row.tag.is_zero() {
                        tag = tag.axpy(&s, &row.tag);
                    }
                }
                None => pos += 1,
            }
        }
        Reduction { residue: cur, tag }
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_tagged(v, &SparseVec::new()).residue
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns `false` (and leaves the basis unchanged) when `v`
    /// already lies in the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        self.insert_tagged(v, &SparseVec::new()).is_none()
    }

    /// Inserts a tagged vector. When it is dependent, returns the tag of the
    /// vanishing combination (a relation among the inserted tags).
    pub fn insert_tagged(&mut self, v: &SparseVec, tag: &SparseVec) -> Option<SparseVec> {
        let red = self.reduce_tagged(v, tag);
        if red.residue.is_zero() {
            return Some(red.tag);
        }
        let lead = red.residue.entries[0].1.inv();
        let vec = red.residue.scale(&lead);
        let tag = red.tag.scale(&lead);
        let pivot = vec.entries[0].0;
        self.by_pivot.insert(pivot, self.rows.len());
        self.rows.push(Row { vec, tag });
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Field::Rational.from_i64(v)
    }

    #[test]
    fn axpy_cancels() {
        let a = SparseVec::from_pairs(vec![(0, q(1)), (3, q(2))]);
        let b = SparseVec::from_pairs(vec![(3, q(1)), (5, q(1))]);
        let c = a.axpy(&q(-2), &b);
        assert_eq!(c.entries(), &[(0, q(1)), (5, q(-2))]);
    }

    #[test]
    fn echelon_normal_form_and_relations() {
        let mut e = Echelon::new(Field::Rational);
        let v1 = SparseVec::from_pairs(vec![(0, q(1)), (1, q(1))]);
        let v2 = SparseVec::from_pairs(vec![(1, q(1)), (2, q(1))]);
        assert!(e.insert_tagged(&v1, &SparseVec::unit(0, Field::Rational)).is_none());
        assert!(e.insert_tagged(&v2, &SparseVec::unit(1, Field::Rational)).is_none());
        let v3 = v1.add(&v2);
        let rel = e.insert_tagged(&v3, &SparseVec::unit(2, Field::Rational)).unwrap();
        // v3 - v1 - v2 = 0
        assert_eq!(rel, SparseVec::from_pairs(vec![(0, q(-1)), (1, q(-1)), (2, q(1))]));
        let nf = e.reduce(&SparseVec::unit(0, Field::Rational));
        assert_eq!(nf.entries(), &[(2, q(1))]);
    }
}

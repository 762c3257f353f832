//! Dense matrices over a single field with exact elimination.

use std::fmt;

use super::scalar::{Field, Scalar};
use super::sparse::{Echelon, SparseVec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Result of solving `m x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Scalar>),
    /// A particular solution; the system has a nontrivial kernel.
    Particular(Vec<Scalar>),
    NoSolution,
}

impl Solution {
    pub fn vector(&self) -> Option<&[Scalar]> {
        match self {
            Solution::Unique(v) | Solution::Particular(v) => Some(v),
            Solution::NoSolution => None,
        }
    }
}

/// Spans computed by [`subspace_ops`], each given as matrix columns.
#[derive(Clone, Debug)]
pub struct SubspaceOps {
    pub intersection: Matrix,
    pub sum: Matrix,
    /// Columns of `B` whose classes form a basis of `(A + B) / A`.
    pub quotient: Matrix,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::SizeMismatch(format!("ragged row of length {}", row.len())));
            }
            for v in row {
                if v.field() != field {
                    return Err(Error::FieldMismatch);
                }
                data.push(v);
            }
        }
        Ok(Matrix { field, rows: r, cols: c, data })
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|v| field.from_i64(*v)).collect())
            .collect();
        Matrix::from_rows(field, rows).expect("rectangular input")
    }

    /// Builds a matrix whose columns are the given sparse vectors.
    pub fn from_columns(field: Field, rows: usize, cols: &[SparseVec]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.entries() {
                m.set(*i, j, v.clone());
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn column_sparse(&self, c: usize) -> SparseVec {
        SparseVec::from_dense(&self.column(c))
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn columns_sparse(&self) -> Vec<SparseVec> {
        (0..self.cols).map(|c| self.column_sparse(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.cols {
            return Err(Error::SizeMismatch(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect())
    }

    fn check_field(&self) -> Result<()> {
        if self.data.iter().any(|v| v.field() != self.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Reduced row-echelon form by Gauss-Jordan elimination, pivoting on the
    /// leftmost available column and the topmost usable row.
    pub fn rref(&self) -> Result<Rref> {
        self.check_field()?;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok(Rref {
            matrix: m,
            rank: pivots.len(),
            pivots,
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.rank)
    }

    /// Columns spanning the kernel, one per free column of the rref.
    pub fn kernel_basis(&self) -> Result<Matrix> {
        let rref = self.rref()?;
        let free: Vec<usize> = (0..self.cols).filter(|c| !rref.pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, self.field.one());
            for (i, &p) in rref.pivots.iter().enumerate() {
                k.set(p, j, rref.matrix.get(i, f).neg());
            }
        }
        Ok(k)
    }

    /// Solves `self * x = b` exactly.
    pub fn solve(&self, b: &[Scalar]) -> Result<Solution> {
        if b.len() != self.rows {
            return Err(Error::SizeMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        if b.iter().any(|v| v.field() != self.field) {
            return Err(Error::FieldMismatch);
        }
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let rref = aug.rref()?;
        if rref.pivots.last() == Some(&self.cols) {
            return Ok(Solution::NoSolution);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &p) in rref.pivots.iter().enumerate() {
            x[p] = rref.matrix.get(i, self.cols).clone();
        }
        Ok(if rref.rank == self.cols {
            Solution::Unique(x)
        } else {
            Solution::Particular(x)
        })
    }
}

/// Intersection, sum and quotient of the column spans of `a` and `b`.
pub fn subspace_ops(a: &Matrix, b: &Matrix) -> Result<SubspaceOps> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    if a.rows != b.rows {
        return Err(Error::SizeMismatch(format!(
            "ambient dimensions {} and {}",
            a.rows, b.rows
        )));
    }
    let field = a.field;
    let n = a.rows;
    let mut sum = Echelon::new(field);
    let mut sum_cols = Vec::new();
    for c in a.columns_sparse() {
        if sum.insert(&c) {
            sum_cols.push(c);
        }
    }
    let dim_a = sum.rank();
    let mut quotient = Vec::new();
    for c in b.columns_sparse() {
        if sum.insert(&c) {
            sum_cols.push(c.clone());
            quotient.push(c);
        }
    }
    // x in A ∩ B  <=>  [A | -B] (u, v) = 0, x = A u.
    let mut stacked = Matrix::zeros(field, n, a.cols + b.cols);
    for r in 0..n {
        for c in 0..a.cols {
            stacked.set(r, c, a.get(r, c).clone());
        }
        for c in 0..b.cols {
            stacked.set(r, a.cols + c, b.get(r, c).neg());
        }
    }
    let ker = stacked.kernel_basis()?;
    let mut inter = Echelon::new(field);
    let mut inter_cols = Vec::new();
    for j in 0..ker.cols() {
        let mut x = vec![field.zero(); n];
        for c in 0..a.cols {
            let u = ker.get(c, j);
            if u.is_zero() {
                continue;
            }
            for (r, xr) in x.iter_mut().enumerate() {
                *xr = xr.add(&a.get(r, c).mul(u));
            }
        }
        let x = SparseVec::from_dense(&x);
        if inter.insert(&x) {
            inter_cols.push(x);
        }
    }
    debug_assert_eq!(dim_a + quotient.len(), sum.rank());
    Ok(SubspaceOps {
        intersection: Matrix::from_columns(field, n, &inter_cols),
        sum: Matrix::from_columns(field, n, &sum_cols),
        quotient: Matrix::from_columns(field, n, &quotient),
    })
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(Q, 2).rref().unwrap();
        assert_eq!((id.rank, id.pivots), (2, vec![0, 1]));
        let z = Matrix::zeros(Q, 3, 3).rref().unwrap();
        assert_eq!((z.rank, z.pivots), (0, vec![]));
        assert_eq!(Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]).rank().unwrap(), 1);
    }

    #[test]
    fn rref_rejects_mixed_fields() {
        let mut m = Matrix::identity(Q, 2);
        m.set(0, 1, Field::Prime(3).one());
        assert!(matches!(m.rref(), Err(Error::FieldMismatch)));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(Q, 3).kernel_basis().unwrap().cols(), 0);
        assert_eq!(Matrix::zeros(Q, 3, 3).kernel_basis().unwrap().cols(), 3);
        let f2 = Field::Prime(2);
        let k = Matrix::from_i64(f2, &[&[1, 1]]).kernel_basis().unwrap();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![f2.one(), f2.one()]);
    }

    #[test]
    fn solve_examples() {
        let b = vec![Q.from_i64(3), Q.from_i64(-4)];
        assert_eq!(Matrix::identity(Q, 2).solve(&b).unwrap(), Solution::Unique(b.clone()));
        assert_eq!(Matrix::zeros(Q, 2, 2).solve(&b).unwrap(), Solution::NoSolution);
        let x = Matrix::from_i64(Q, &[&[2]]).solve(&[Q.one()]).unwrap();
        assert_eq!(x, Solution::Unique(vec![Q.parse("1/2").unwrap()]));
    }

    #[test]
    fn subspace_examples() {
        let a = Matrix::from_i64(Q, &[&[1, 0], &[0, 1], &[0, 0]]);
        let same = subspace_ops(&a, &a).unwrap();
        assert_eq!(same.intersection.cols(), 2);
        assert_eq!(same.quotient.cols(), 0);

        let a = Matrix::from_i64(Q, &[&[1, 0], &[0, 1], &[0, 0], &[0, 0]]);
        let b = Matrix::from_i64(Q, &[&[0, 0], &[0, 0], &[1, 0], &[0, 1]]);
        let ops = subspace_ops(&a, &b).unwrap();
        assert_eq!(ops.intersection.cols(), 0);
        assert_eq!(ops.sum.cols(), 4);

        let a = Matrix::from_i64(Q, &[&[1], &[1]]);
        let b = Matrix::identity(Q, 2);
        let ops = subspace_ops(&a, &b).unwrap();
        assert_eq!(ops.quotient.cols(), 1);
        assert_eq!(ops.intersection.cols(), 1);
    }
}

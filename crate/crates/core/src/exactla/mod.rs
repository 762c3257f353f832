//! Exact linear algebra over `Q` and `F_p`.

mod matrix;
mod scalar;
mod sparse;

pub use matrix::{subspace_ops, Matrix, Rref, Solution, SubspaceOps};
pub use scalar::{Field, Rational, Scalar};
pub use sparse::{Echelon, Reduction, SparseVec};

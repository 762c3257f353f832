//! Secondary operations on the homology of an algebra whose structure is
//! trivial on homology: lift each generator through the differential of the
//! endomorphism operad and evaluate cycles of the linking operad.

mod complex;
mod lift;
mod multilinear;

pub use complex::{ChainHomology, FiniteChainComplex};
pub use lift::{h1_end_dim, h1_end_vanishes, AlgebraStructure, Lift, PivotOrder, Realization};
pub use multilinear::{end_differential, Evaluator, MultilinearMap};

/// The bundled cellular complex of `S¹ ∨ D³ ∨ S⁴` with its product.
pub const S1D3S4: &str = include_str!("../../data/s1d3s4.json");

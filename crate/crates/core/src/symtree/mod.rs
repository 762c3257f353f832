//! Tree bases of free symmetric and planar operads.

mod element;
mod enumerate;
mod generator;
mod perm;
mod sigma;
mod tree;

pub use element::OperadElement;
pub use enumerate::{free_basis, TreeEnumerator};
pub use generator::{GenId, GeneratorSymbol, Signature, Symmetry};
pub use perm::{koszul_sign, Perm};
pub use sigma::{SigmaModuleGraded, SigmaSlot};
pub use tree::{graft, substitute_node, Tree};

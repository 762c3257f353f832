//! Presented dg operads, their arity truncations, chainification and
//! universal linking.

mod chain;
mod link;
mod presentation;
mod truncated;

pub use chain::{ch_normal_form, chainify, ChNormalForm};
pub use link::{link_chain, link_step, link_universal, lu_generating, LinkSpec, LinkStep};
pub use presentation::Presentation;
pub use truncated::{component_basis, ideal_component, BasisOrder, Slot, TruncatedComponent, TruncatedOperad};

//! Computer algebra for differential graded operads.
//!
//! The crate covers presented operads truncated by arity, the
//! chainification functor and universal linking operads, homology of
//! truncated dg operads, secondary operations obtained by lifting an
//! algebra structure through the endomorphism operad, and minimal models
//! built by iterated linking.

pub mod error;
pub mod exactla;
pub mod homology;
pub mod minmodel;
pub mod corpus;
pub mod dgoperad;
pub mod symtree;
pub mod syntax;
pub mod transfer;

pub use error::{Error, Result};

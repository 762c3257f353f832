//! Homology of truncated dg operads.

mod generators;
mod relation;
mod table;

pub use generators::{minimal_homology_generators, GeneratorReport};
pub use relation::{module_dims, relation_module, relation_module_for};
pub use table::{
    character, homology_map, homology_in_arities, homology_of, homology_table, homology_table_ordered, ClassMatch, HomologySlot,
    HomologyTable,
};

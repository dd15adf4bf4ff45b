//! Truncated simplicial sets and groups, cover nerves, Moore complexes, and
//! exhaustive search for simplicial maps and homotopies.

mod cover;
mod group;
mod maps;
pub mod search;
mod sset;

pub use cover::{ClosureReport, CoverComplex, CoverJson};
pub use group::{
    gbar_subgroups, moore_homotopy, moore_subgroup, validate_simplicial_group, GbarLevel, SimplicialGroup,
};
pub(crate) use maps::map_problem;
pub use maps::{enumerate_simplicial_maps, homotopic, homotopy_classes, Partition};
pub use sset::{
    circle, from_words, minimal_sphere, point, standard_simplex, validate_simplicial, MapTable, SimplicialMap,
    SimplicialSet, SsetJson,
};

//! Table-backed finite groups, homomorphisms, actions and crossed modules.

mod group;
mod hom;
pub(crate) mod iso;
pub mod presets;
mod xmod;

pub use group::{FiniteGroup, GroupJson, Quotient, Subgroup};
pub use hom::{check_hom, GroupAction, GroupHom};
pub use iso::{abelian_invariants, are_isomorphic, find_isomorphism};
pub use presets::{preset_library, Preset};
pub use xmod::{validate_crossed_module, CrossedModule, DerivedModules, XmodJson};

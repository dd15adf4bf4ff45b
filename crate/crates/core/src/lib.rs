//! Finite crossed modules and the simplicial machinery around them.
//!
//! The crate is organised bottom-up:
//!
//! * [`fingroup`]: table-backed finite groups, homomorphisms, actions and
//!   crossed modules `(H → D)`.
//! * [`simplicial`]: truncated simplicial sets and groups, Moore complexes,
//!   cover nerves, and a constraint-propagation search for simplicial maps
//!   and homotopies.
//! * [`twist`]: twisting functions, twisted Cartesian products, `W̄G`, and
//!   the classification of principal bundles by maps into `W̄G`.
//! * [`xnerve`]: the nerve `N𝒞` of a crossed module, the Duskin nerve `Ñ𝒞`,
//!   and their comparison.
//! * [`gerbe`]: nonabelian Čech cocycles `{d_αβ, h_αβγ}`, stable
//!   equivalence, lifting, and abelian cohomology oracles.
//! * [`gauge`]: numerical residual checks of connection and B-field gluing
//!   laws for matrix-group crossed modules.

pub mod error;
pub mod fingroup;
pub mod gauge;
pub mod gerbe;
pub mod parallel;
pub mod report;
pub mod simplicial;
pub mod twist;
pub mod xnerve;

pub use error::{Error, Result};
pub use report::{ValidationReport, Violation};

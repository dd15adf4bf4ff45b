//! The nerve `N𝒞_(H→D)` of a crossed module as a simplicial group, the
//! Duskin nerve `Ñ𝒞` of its 2-category, and the constructions comparing them.

mod duskin;
mod exact;
mod nerve;
mod prop55;
mod quotient;

pub use duskin::{build_duskin, validate_duskin_labels, DuskinCodec, DuskinNerve, DuskinSimplex, MAX_DUSKIN_LEVEL};
pub use exact::{exactness_check, ExactnessReport, LevelExactness, SequenceReport};
pub use nerve::{
    build_nerve, chain_degeneracy, chain_face, chain_objects, nerve_homotopy, NerveCodec, NerveGroup, MAX_LEVEL_ORDER,
};
pub use prop55::{check_prop55, BarDuskinIso, FailureCertificate, Level2Entry, Prop55Dictionary, Prop55Outcome};
pub use quotient::{homotopy_quotient, semidirect_model, HomotopyQuotient, SemidirectLevel, SemidirectModel};

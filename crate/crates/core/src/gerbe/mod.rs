//! Nonabelian Čech cocycles `{d_αβ, h_αβγ}` for a crossed module, their
//! stable equivalence and classification, lifting along `H → Im α`, and
//! integer Smith-form oracles for abelian coefficients.

mod bundle;
mod classify;
mod cocycle;
mod json;
mod lift;
mod maps;
mod smith;

pub use bundle::{bundle_product, enumerate_bundles, validate_bundle, CMBundleCocycle};
pub use classify::{
    classify_gerbes, cocycle_code, enumerate_cocycles, generator_witnesses, within_default_limits, ClassReport,
    ClassificationReport, ClassifyOptions, CocycleValues, GerbeClass, GerbeClassification, DEFAULT_MAX_CHARTS,
    DEFAULT_MAX_GROUP_PRODUCT, MAX_COCYCLES,
};
pub use cocycle::{
    apply_witness, compose_witnesses, pullback_cocycle, validate_cocycle, CechLayout, GerbeCocycle, StableWitness,
};
pub use json::{CocycleJson, CoverRef, XmodRef};
pub use lift::{lift_gerbe, LiftResult, Obstruction};
pub use maps::{
    classify_via_maps, cocycle_to_duskin_map, cocycle_to_simplicial_map, simplicial_map_to_cocycle, CoverMapContext, CoverNerve,
    MapClassComparison,
};
pub use smith::{
    abelian_oracle, coboundary_matrix, is_coboundary, smith_normal_form, AbelianBasis, CohomologyGroup, OracleResult,
    SmithForm,
};

//! Twisting functions, twisted Cartesian products, the classifying space
//! `W̄G`, and the classification of principal bundles by maps into it.

mod classify;
mod twisting;
mod wbar;

pub use classify::{classify_bundles, classifying_map, twisting_classes, BundleClassification};
pub use twisting::{
    build_twisted_product, check_equivalence, enumerate_twistings, twistings_equivalent, validate_twisting,
    witness_compose, witness_inverse, EquivalenceWitness, TwistedProduct, Twisting, TwistingJson, TwistingLevel,
};
pub use wbar::{bar_construction, build_wbar, build_wg, WbarCodec};

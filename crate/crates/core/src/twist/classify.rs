use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::parallel::SearchOptions;
use crate::simplicial::{enumerate_simplicial_maps, homotopy_classes, Partition, SimplicialGroup, SimplicialMap, SimplicialSet};
use crate::twist::{build_wbar, enumerate_twistings, twistings_equivalent, Twisting, WbarCodec};

/// The classifying map `x ↦ (τ(x), τ(∂₀x), …, τ(∂₀ⁿ⁻¹x))` of a twisting.
pub fn classifying_map(t: &Twisting, codec: &WbarCodec) -> SimplicialMap {
    let x = t.base();
    SimplicialMap::from_fn(x, |n, s| {
        let mut comps = vec![0; n];
        let mut cur = s;
        for k in (0..n).rev() {
            // level of the current simplex is k + 1
            comps[k] = t.at(k + 1, cur);
            if k > 0 {
                cur = x.face(k + 1, 0, cur);
            }
        }
        codec.encode(&comps)
    })
}

/// Partition of twistings into equivalence classes, comparing each against
/// the class representatives found so far.
pub fn twisting_classes(twistings: &[Twisting], opts: &SearchOptions) -> Result<Partition> {
    let mut class_of = Vec::with_capacity(twistings.len());
    let mut representatives: Vec<usize> = Vec::new();
    for (i, t) in twistings.iter().enumerate() {
        let verdicts = opts.map(&representatives, |&r| {
            twistings_equivalent(&twistings[r], t, opts.budget).map(|w| w.is_some())
        });
        let mut found = None;
        for (k, v) in verdicts.into_iter().enumerate() {
            if v? {
                found = Some(k);
                break;
            }
        }
        match found {
            Some(k) => class_of.push(k),
            None => {
                class_of.push(representatives.len());
                representatives.push(i);
            }
        }
    }
    Ok(Partition {
        class_of,
        representatives,
    })
}

/// Both sides of the bundle classification on a finite base.
#[derive(Clone, Debug, Serialize)]
pub struct BundleClassification {
    pub base: String,
    pub group: String,
    pub truncation: usize,
    pub twisting_count: usize,
    pub twisting_classes: usize,
    pub map_count: usize,
    pub homotopy_classes: usize,
    /// `twisting_to_homotopy[c]` is the homotopy class of the classifying
    /// map of twisting class `c`'s representative.
    pub twisting_to_homotopy: Vec<usize>,
    /// Twistings and maps correspond one-to-one via classifying maps and
    /// pullback of the canonical twisting.
    pub pointwise_bijection: bool,
    /// Equivalent twistings have homotopic classifying maps and the
    /// induced map on classes is bijective.
    pub matched: bool,
}

/// Counts twisting classes and homotopy classes of maps `X → W̄G` and
/// checks that classifying maps induce a bijection between them.
pub fn classify_bundles(x: &SimplicialSet, g: &SimplicialGroup, opts: &SearchOptions) -> Result<BundleClassification> {
    let top = x.truncation();
    if g.truncation() < top {
        return Err(Error::structural("group must reach the base truncation (twisting equivalences live in Gₙ)"));
    }
    let twistings = enumerate_twistings(x, g, opts)?;
    let tw_partition = twisting_classes(&twistings, opts)?;

    let (wbar, canonical, codec) = build_wbar(&g.truncate(top - 1)?);
    let maps = enumerate_simplicial_maps(x, &wbar, opts)?;
    let map_partition = homotopy_classes(&maps, x, &wbar, opts)?;
    let map_index: HashMap<&SimplicialMap, usize> = maps.iter().enumerate().map(|(i, m)| (m, i)).collect();

    let mut pointwise_bijection = twistings.len() == maps.len();
    let mut image_class = Vec::with_capacity(twistings.len());
    for t in &twistings {
        let f = classifying_map(t, &codec);
        let pulled = canonical.pullback(x, &f)?;
        if pulled.values() != t.values() {
            pointwise_bijection = false;
        }
        match map_index.get(&f) {
            Some(&i) => image_class.push(map_partition.class_of[i]),
            None => {
                pointwise_bijection = false;
                image_class.push(usize::MAX);
            }
        }
    }
    let twisting_to_homotopy: Vec<usize> = tw_partition.representatives.iter().map(|&r| image_class[r]).collect();
    let well_defined = (0..twistings.len()).all(|i| image_class[i] == twisting_to_homotopy[tw_partition.class_of[i]]);
    let mut hit = vec![false; map_partition.class_count()];
    let mut injective = true;
    for &c in &twisting_to_homotopy {
        if c == usize::MAX || hit[c] {
            injective = false;
        } else {
            hit[c] = true;
        }
    }
    let surjective = hit.iter().all(|&h| h);
    Ok(BundleClassification {
        base: x.name().to_string(),
        group: g.name().to_string(),
        truncation: top,
        twisting_count: twistings.len(),
        twisting_classes: tw_partition.class_count(),
        map_count: maps.len(),
        homotopy_classes: map_partition.class_count(),
        twisting_to_homotopy,
        pointwise_bijection,
        matched: pointwise_bijection && well_defined && injective && surjective,
    })
}

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fingroup::CrossedModule;
use crate::gerbe::classify::GerbeClassification;
use crate::gerbe::cocycle::{CechLayout, GerbeCocycle};
use crate::parallel::SearchOptions;
use crate::simplicial::{homotopy_classes, SimplicialMap, SimplicialSet};
use crate::xnerve::{check_prop55, BarDuskinIso, Prop55Outcome};

/// Which nerve of the cover the maps start from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoverNerve {
    /// All chart words with admissible support, repeats and any order.
    Groupoid,
    /// Nondecreasing chart words only.
    Ordered,
}

/// The cover nerve with its chart words and the comparison `W̄N𝒞 ≅ Ñ𝒞`
/// at a common truncation, shared by every cocycle on the cover.
#[derive(Clone, Debug)]
pub struct CoverMapContext {
    pub layout: Arc<CechLayout>,
    pub xm: Arc<CrossedModule>,
    pub source: SimplicialSet,
    /// Chart word of each simplex, indexed like `source`.
    pub words: Vec<Vec<Vec<usize>>>,
    pub iso: BarDuskinIso,
}

impl CoverMapContext {
    pub fn new(layout: Arc<CechLayout>, xm: Arc<CrossedModule>, nerve: CoverNerve, truncation: usize, budget: u64) -> Result<Self> {
        let (source, words) = match nerve {
            CoverNerve::Groupoid => layout.cover().nerve(truncation)?,
            CoverNerve::Ordered => layout.cover().ordered_nerve(truncation)?,
        };
        let iso = match check_prop55(&xm, truncation, budget)? {
            Prop55Outcome::Found(iso) => *iso,
            Prop55Outcome::Failed(cert) => {
                return Err(Error::Transcription(format!(
                    "no bar/Duskin comparison at level {}: {}",
                    cert.level, cert.reason
                )))
            }
        };
        Ok(Self {
            layout,
            xm,
            source,
            words,
            iso,
        })
    }

    pub fn target(&self) -> &SimplicialSet {
        &self.iso.wbar
    }

    fn simplex(&self, word: &[usize]) -> usize {
        let n = word.len() - 1;
        self.words[n]
            .iter()
            .position(|w| w == word)
            .expect("admissible chart word")
    }
}

/// The simplicial map `N(cover) → Ñ𝒞` sending a chart word `(c₀, …, cₙ)`
/// to the simplex with free labels `edge(c₀, cⱼ)` and `cell(c₀, cⱼ, cₖ)`.
///
/// On non-increasing words the labels come from the antisymmetric
/// extension; the result is validated as a simplicial map.
pub fn cocycle_to_duskin_map(c: &GerbeCocycle, ctx: &CoverMapContext) -> Result<SimplicialMap> {
    let codec = ctx.iso.duskin.codec();
    let map = SimplicialMap {
        levels: ctx
            .words
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|w| {
                        let ds: Vec<usize> = w[1..].iter().map(|&v| c.edge(w[0], v)).collect();
                        let mut hs = Vec::new();
                        for j in 1..w.len() {
                            for k in j + 1..w.len() {
                                hs.push(c.cell(w[0], w[j], w[k]));
                            }
                        }
                        codec.encode_free(&ds, &hs)
                    })
                    .collect()
            })
            .collect(),
    };
    let report = map.validate(&ctx.source, ctx.iso.duskin.set())?;
    if !report.is_valid() {
        return Err(Error::Transcription(format!("cocycle extension is not simplicial: {report}")));
    }
    Ok(map)
}

/// The cocycle as a simplicial map `N(cover) → W̄N𝒞`.
pub fn cocycle_to_simplicial_map(c: &GerbeCocycle, ctx: &CoverMapContext) -> Result<SimplicialMap> {
    Ok(cocycle_to_duskin_map(c, ctx)?.compose(&ctx.iso.inverse))
}

/// Reads `d_ab` and `h_abc` back from a map `N(cover) → W̄N𝒞`.
pub fn simplicial_map_to_cocycle(map: &SimplicialMap, ctx: &CoverMapContext) -> Result<GerbeCocycle> {
    let duskin = &ctx.iso.duskin;
    let label = |word: &[usize]| {
        let n = word.len() - 1;
        duskin.expand(n, ctx.iso.forward.apply(n, map.apply(n, ctx.simplex(word))))
    };
    let d = ctx.layout.pairs().iter().map(|&[a, b]| label(&[a, b]).edge(0, 1)).collect();
    let h = ctx
        .layout
        .triples()
        .iter()
        .map(|&[a, b, g]| label(&[a, b, g]).cell(0, 1, 2))
        .collect();
    GerbeCocycle::new(ctx.layout.clone(), ctx.xm.clone(), d, h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapClassComparison {
    pub stable_classes: usize,
    pub homotopy_classes: usize,
    /// Stable classes go to homotopy classes bijectively.
    pub matched: bool,
}

/// Homotopy-classifies the maps of every enumerated cocycle and compares
/// the partition with stable equivalence.
pub fn classify_via_maps(classification: &GerbeClassification, ctx: &CoverMapContext, opts: &SearchOptions) -> Result<MapClassComparison> {
    let maps: Vec<SimplicialMap> = opts
        .map(&classification.cocycles, |c| cocycle_to_simplicial_map(c, ctx))
        .into_iter()
        .collect::<Result<_>>()?;
    let partition = homotopy_classes(&maps, &ctx.source, ctx.target(), opts)?;
    // Same partition means each stable class sits in exactly one homotopy
    // class and vice versa.
    let stable = classification.class_count();
    let mut to_homotopy = vec![usize::MAX; stable];
    let mut matched = partition.class_count() == stable;
    for (i, &s) in classification.class_of.iter().enumerate() {
        let hc = partition.class_of[i];
        if to_homotopy[s] == usize::MAX {
            to_homotopy[s] = hc;
        } else if to_homotopy[s] != hc {
            matched = false;
        }
    }
    let mut seen = to_homotopy.clone();
    seen.sort_unstable();
    seen.dedup();
    matched &= seen.len() == stable;
    Ok(MapClassComparison {
        stable_classes: stable,
        homotopy_classes: partition.class_count(),
        matched,
    })
}

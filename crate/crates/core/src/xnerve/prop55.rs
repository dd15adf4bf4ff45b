use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingroup::CrossedModule;
use crate::simplicial::{map_problem, SimplicialMap, SimplicialSet};
use crate::twist::{build_wbar, WbarCodec};
use crate::xnerve::duskin::{build_duskin, DuskinNerve};
use crate::xnerve::nerve::{build_nerve, NerveGroup};

/// Levels found by constraint search; higher ones are read off from faces.
const SEARCH_LEVELS: usize = 3;

/// A simplicial isomorphism `W̄N𝒞 → Ñ𝒞` with everything needed to use it.
#[derive(Clone, Debug)]
pub struct BarDuskinIso {
    pub nerve: NerveGroup,
    pub wbar: SimplicialSet,
    pub wbar_codec: WbarCodec,
    pub duskin: DuskinNerve,
    /// `W̄N𝒞 → Ñ𝒞`.
    pub forward: SimplicialMap,
    /// `Ñ𝒞 → W̄N𝒞`.
    pub inverse: SimplicialMap,
}

/// Result of [`check_prop55`]: an isomorphism, or the reason none exists.
#[derive(Clone, Debug)]
pub enum Prop55Outcome {
    Found(Box<BarDuskinIso>),
    Failed(FailureCertificate),
}

impl Prop55Outcome {
    pub fn is_found(&self) -> bool {
        matches!(self, Prop55Outcome::Found(_))
    }

    pub fn iso(&self) -> Option<&BarDuskinIso> {
        match self {
            Prop55Outcome::Found(iso) => Some(iso),
            Prop55Outcome::Failed(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureCertificate {
    /// Lowest level at which no compatible bijection exists.
    pub level: usize,
    pub wbar_sizes: Vec<usize>,
    pub duskin_sizes: Vec<usize>,
    pub reason: String,
}

/// Searches for a level-wise bijection `W̄N𝒞 → Ñ𝒞` through level
/// `truncation ≤ 4` commuting with every face and degeneracy.
///
/// Levels up to 3 are solved as one constraint problem with an
/// all-different condition per level; level 4 is determined by faces, since
/// both sides are 3-coskeletal. The result is re-validated before it is
/// returned.
pub fn check_prop55(xm: &CrossedModule, truncation: usize, budget: u64) -> Result<Prop55Outcome> {
    if truncation == 0 {
        return Err(Error::BadParameter("comparison needs truncation ≥ 1".into()));
    }
    let nerve = build_nerve(xm, truncation - 1)?;
    let (wbar, _, wbar_codec) = build_wbar(nerve.group());
    let duskin = build_duskin(xm, truncation)?;
    let wbar_sizes = wbar.sizes().to_vec();
    let duskin_sizes = duskin.set().sizes().to_vec();
    if let Some(level) = (0..=truncation).find(|&n| wbar_sizes[n] != duskin_sizes[n]) {
        return Ok(Prop55Outcome::Failed(FailureCertificate {
            level,
            reason: format!("level {level} has {} bar simplices but {} Duskin simplices", wbar_sizes[level], duskin_sizes[level]),
            wbar_sizes,
            duskin_sizes,
        }));
    }

    let searched = truncation.min(SEARCH_LEVELS);
    let Some(low) = search_levels(&wbar, duskin.set(), searched, budget)? else {
        let level = (1..=searched)
            .find(|&l| matches!(search_levels(&wbar, duskin.set(), l, budget), Ok(None)))
            .unwrap_or(searched);
        return Ok(Prop55Outcome::Failed(FailureCertificate {
            level,
            reason: format!("no bijection through level {level} commutes with all faces and degeneracies"),
            wbar_sizes,
            duskin_sizes,
        }));
    };
    let mut levels = low.levels;
    for n in searched + 1..=truncation {
        match extend_by_faces(&wbar, duskin.set(), &levels, n) {
            Ok(level) => levels.push(level),
            Err(reason) => {
                return Ok(Prop55Outcome::Failed(FailureCertificate {
                    level: n,
                    reason,
                    wbar_sizes,
                    duskin_sizes,
                }))
            }
        }
    }
    let forward = SimplicialMap { levels };
    let report = forward.validate(&wbar, duskin.set())?;
    if !report.is_valid() {
        return Err(Error::Transcription(format!("bar–Duskin comparison failed re-validation: {report}")));
    }
    let inverse = invert(&forward)?;
    Ok(Prop55Outcome::Found(Box::new(BarDuskinIso {
        nerve,
        wbar,
        wbar_codec,
        duskin,
        forward,
        inverse,
    })))
}

fn search_levels(
    wbar: &SimplicialSet,
    duskin: &SimplicialSet,
    top: usize,
    budget: u64,
) -> Result<Option<SimplicialMap>> {
    let source = wbar.truncate(top)?;
    let target = duskin.truncate(top)?;
    let mut mp = map_problem(&source, &target)?;
    for lvl in &mp.vars {
        mp.problem.add_all_different(lvl.clone());
    }
    Ok(mp.problem.solve_first(budget)?.map(|sol| mp.solution_to_map(&sol)))
}

/// Level `n` of the iso from level `n − 1`, matching simplices by faces.
fn extend_by_faces(
    wbar: &SimplicialSet,
    duskin: &SimplicialSet,
    levels: &[Vec<usize>],
    n: usize,
) -> std::result::Result<Vec<usize>, String> {
    let mut by_faces: HashMap<Vec<usize>, usize> = HashMap::with_capacity(duskin.size(n));
    for y in 0..duskin.size(n) {
        let key: Vec<usize> = (0..=n).map(|i| duskin.face(n, i, y)).collect();
        if by_faces.insert(key, y).is_some() {
            return Err(format!("Duskin level {n} is not determined by its faces"));
        }
    }
    let mut level = Vec::with_capacity(wbar.size(n));
    for x in 0..wbar.size(n) {
        let key: Vec<usize> = (0..=n).map(|i| levels[n - 1][wbar.face(n, i, x)]).collect();
        match by_faces.get(&key) {
            Some(&y) => level.push(y),
            None => return Err(format!("bar simplex {x} at level {n} has no Duskin simplex with matching faces")),
        }
    }
    Ok(level)
}

fn invert(map: &SimplicialMap) -> Result<SimplicialMap> {
    let levels = map
        .levels
        .iter()
        .enumerate()
        .map(|(n, lvl)| {
            let mut inv = vec![usize::MAX; lvl.len()];
            for (x, &y) in lvl.iter().enumerate() {
                if y >= inv.len() || inv[y] != usize::MAX {
                    return Err(Error::Transcription(format!("comparison is not bijective at level {n}")));
                }
                inv[y] = x;
            }
            Ok(inv)
        })
        .collect::<Result<_>>()?;
    Ok(SimplicialMap { levels })
}

/// One level-2 entry of the dictionary, both sides decoded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level2Entry {
    /// Outer component `(d; h) ∈ N𝒞₁` of the bar simplex.
    pub bar_outer: (usize, usize),
    /// Inner component `d' ∈ N𝒞₀`.
    pub bar_inner: usize,
    pub d01: usize,
    pub d12: usize,
    pub d02: usize,
    pub h012: usize,
}

/// The comparison as written to disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop55Dictionary {
    pub crossed_module: String,
    pub truncation: usize,
    pub sizes: Vec<usize>,
    /// `levels[n][x]` is the Duskin simplex paired with bar simplex `x`.
    pub levels: Vec<Vec<usize>>,
    pub level2: Vec<Level2Entry>,
}

impl BarDuskinIso {
    pub fn dictionary(&self) -> Prop55Dictionary {
        let ncodec = self.nerve.codec();
        let level2 = if self.wbar.truncation() >= 2 {
            (0..self.wbar.size(2))
                .map(|x| {
                    let comps = self.wbar_codec.decode(2, x);
                    let (d, hs) = ncodec.decode(1, comps[1]);
                    let s = self.duskin.expand(2, self.forward.apply(2, x));
                    Level2Entry {
                        bar_outer: (d, hs[0]),
                        bar_inner: comps[0],
                        d01: s.edge(0, 1),
                        d12: s.edge(1, 2),
                        d02: s.edge(0, 2),
                        h012: s.cell(0, 1, 2),
                    }
                })
                .collect()
        } else {
            Vec::new()
        };
        Prop55Dictionary {
            crossed_module: self.nerve.crossed_module().name().to_string(),
            truncation: self.wbar.truncation(),
            sizes: self.wbar.sizes().to_vec(),
            levels: self.forward.levels.clone(),
            level2,
        }
    }
}

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fingroup::{are_isomorphic, check_hom, CrossedModule, FiniteGroup};
use crate::report::ValidationReport;
use crate::simplicial::{validate_simplicial, MapTable, SimplicialMap, SimplicialSet};
use crate::xnerve::nerve::{build_nerve, NerveGroup, MAX_LEVEL_ORDER};

/// `EH ×_α D`: the level-wise orbit set of `EH × D` under the diagonal
/// `H`-action, with its comparison map to `N𝒞_(H→D)`.
#[derive(Clone, Debug)]
pub struct HomotopyQuotient {
    /// Orbits at each level, numbered by their smallest member of `EHₙ × D`.
    pub set: SimplicialSet,
    /// Smallest member of each orbit, index `e·|D| + d`.
    pub representatives: Vec<Vec<usize>>,
    /// Orbit map to the nerve, `(k; k₁…kₙ; d) ↦ (α(k)d; k₁…kₙ)`.
    pub to_nerve: SimplicialMap,
    /// Simplicial identities on the quotient, well-definedness, bijectivity
    /// and compatibility of the comparison.
    pub report: ValidationReport,
}

/// `EH = N𝒞_(H→H)` as the nerve of the identity crossed module.
fn total_space(xm: &CrossedModule, truncation: usize) -> Result<NerveGroup> {
    build_nerve(&CrossedModule::identity(xm.h().clone()), truncation)
}

/// `(k; k₁…kₙ) ↦ (α(k)d; k₁…kₙ)` on `EHₙ × D`, index `e·|D| + d`.
fn comparison(xm: &CrossedModule, eh: &NerveGroup, target: &NerveGroup, n: usize, x: usize) -> usize {
    let nd = xm.d().order();
    let (k, ks) = eh.codec().decode(n, x / nd);
    target.codec().encode(xm.d().mul(xm.alpha(k), x % nd), &ks)
}

/// Builds `EH ×_α D` through level `truncation` and compares it with the nerve.
///
/// In object coordinates an element of `EHₙ` is a tuple `(y₀, …, yₙ)` of
/// elements of `H`, and `h` acts by `(y, d) ↦ (y·h, α(h)⁻¹d)`. On chain
/// coordinates `(k; k₁…kₙ)` that only changes the anchor `k ↦ kh`.
pub fn homotopy_quotient(xm: &CrossedModule, truncation: usize) -> Result<HomotopyQuotient> {
    let eh = total_space(xm, truncation)?;
    let target = build_nerve(xm, truncation)?;
    let (h, d) = (xm.h(), xm.d());
    let nd = d.order();
    let ecodec = eh.codec();

    let act = |n: usize, x: usize, g: usize| -> usize {
        let (k, ks) = ecodec.decode(n, x / nd);
        ecodec.encode(h.mul(k, g), &ks) * nd + d.mul(d.inv(xm.alpha(g)), x % nd)
    };
    let canonical = |n: usize, x: usize| -> usize { h.elements().map(|g| act(n, x, g)).min().expect("H is nonempty") };

    let mut representatives = Vec::with_capacity(truncation + 1);
    let mut orbit_index: Vec<Vec<usize>> = Vec::with_capacity(truncation + 1);
    for n in 0..=truncation {
        let size = eh.group().level(n).order() * nd;
        let reps: Vec<usize> = (0..size).filter(|&x| canonical(n, x) == x).collect();
        let mut index = vec![usize::MAX; size];
        for (i, &r) in reps.iter().enumerate() {
            index[r] = i;
        }
        representatives.push(reps);
        orbit_index.push(index);
    }
    let orbit_of = |n: usize, x: usize| orbit_index[n][canonical(n, x)];
    let lift_face = |n: usize, i: usize, x: usize| eh.group().face(n, i, x / nd) * nd + x % nd;
    let lift_degeneracy = |n: usize, j: usize, x: usize| eh.group().degeneracy(n, j, x / nd) * nd + x % nd;

    let faces = (0..=truncation)
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..=n)
                .map(|i| representatives[n].iter().map(|&r| orbit_of(n - 1, lift_face(n, i, r))).collect::<MapTable>())
                .collect()
        })
        .collect();
    let degeneracies = (0..truncation)
        .map(|n| {
            (0..=n)
                .map(|j| {
                    representatives[n]
                        .iter()
                        .map(|&r| orbit_of(n + 1, lift_degeneracy(n, j, r)))
                        .collect::<MapTable>()
                })
                .collect()
        })
        .collect();
    let sizes = representatives.iter().map(Vec::len).collect();
    let set = SimplicialSet::new(format!("EH x_a D {}", xm.name()), sizes, faces, degeneracies)?;

    let mut report = validate_simplicial(&set);
    for n in 0..=truncation {
        let size = eh.group().level(n).order() * nd;
        for x in 0..size {
            if comparison(xm, &eh, &target, n, x) != comparison(xm, &eh, &target, n, canonical(n, x)) {
                report.push("orbit invariance", format!("level {n}, element {x}"));
                break;
            }
        }
    }
    let to_nerve = SimplicialMap {
        levels: representatives
            .iter()
            .enumerate()
            .map(|(n, reps)| reps.iter().map(|&r| comparison(xm, &eh, &target, n, r)).collect())
            .collect(),
    };
    report.extend(to_nerve.validate(&set, target.group().underlying())?);
    for (n, lvl) in to_nerve.levels.iter().enumerate() {
        let mut seen = vec![false; target.group().level(n).order()];
        for &y in lvl {
            seen[y] = true;
        }
        if lvl.len() != seen.len() || seen.iter().any(|s| !s) {
            report.push("bijective comparison", format!("level {n}"));
        }
    }
    Ok(HomotopyQuotient {
        set,
        representatives,
        to_nerve,
        report,
    })
}

/// Checks of one level of `EH ⋊_α D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemidirectLevel {
    pub level: usize,
    /// `|EHₙ ⋊ D|`.
    pub order: usize,
    /// `|(EHₙ ⋊ D)/Kₙ|`, with `Kₙ = {((h; e…e), α(h)⁻¹)}`.
    pub quotient_order: usize,
    pub nerve_order: usize,
    pub kernel_normal: bool,
    /// `(k; kⱼ; d) ↦ (α(k)d; kⱼ)` is a surjective homomorphism with kernel `Kₙ`.
    pub comparison_exact: bool,
    /// Independent isomorphism search between the quotient and the nerve level.
    pub isomorphic: bool,
    /// The comparison commutes with faces into this level.
    pub faces_commute: bool,
}

/// `EH ⋊_α D` checked level by level against `N𝒞_(H→D)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemidirectModel {
    pub levels: Vec<SemidirectLevel>,
}

impl SemidirectModel {
    pub fn is_verified(&self) -> bool {
        self.levels.iter().all(|l| {
            l.kernel_normal
                && l.comparison_exact
                && l.isomorphic
                && l.faces_commute
                && l.quotient_order == l.nerve_order
        })
    }
}

/// `EHₙ ⋊ D` with `D` acting on each chain entry, index `e·|D| + d`.
fn semidirect_level(xm: &CrossedModule, eh: &NerveGroup, n: usize) -> FiniteGroup {
    let d = xm.d();
    let nd = d.order();
    let ecodec = eh.codec();
    let level = eh.group().level(n);
    let twist = |g: usize, e: usize| -> usize {
        let (k, ks) = ecodec.decode(n, e);
        let ks: Vec<usize> = ks.iter().map(|&x| xm.act(g, x)).collect();
        ecodec.encode(xm.act(g, k), &ks)
    };
    FiniteGroup::from_fn(format!("EH{n}xD"), level.order() * nd, |a, b| {
        let (ea, da) = (a / nd, a % nd);
        let (eb, db) = (b / nd, b % nd);
        level.mul(ea, twist(da, eb)) * nd + d.mul(da, db)
    })
}

/// Builds `EH ⋊ D` through level `truncation`, factors by the image of `H`,
/// and checks the result against the nerve group.
pub fn semidirect_model(xm: &CrossedModule, truncation: usize) -> Result<SemidirectModel> {
    let eh = total_space(xm, truncation)?;
    let target = build_nerve(xm, truncation)?;
    let (h, d) = (xm.h(), xm.d());
    let nd = d.order();
    let mut levels = Vec::with_capacity(truncation + 1);
    for n in 0..=truncation {
        let order = eh.group().level(n).order() * nd;
        if order > MAX_LEVEL_ORDER {
            return Err(Error::BadParameter(format!(
                "semidirect level {n} of {} has {order} elements, above the limit {MAX_LEVEL_ORDER}",
                xm.name()
            )));
        }
        let group = semidirect_level(xm, &eh, n);
        let identity_chain = vec![h.identity(); n];
        let mut kernel: Vec<usize> = h
            .elements()
            .map(|g| eh.codec().encode(g, &identity_chain) * nd + d.inv(xm.alpha(g)))
            .collect();
        kernel.sort_unstable();
        let kernel_normal = group.is_subgroup(&kernel) && group.is_normal(&kernel);
        let nerve_level = target.group().level(n);
        let map: Vec<usize> = (0..order).map(|x| comparison(xm, &eh, &target, n, x)).collect();
        let is_hom = check_hom(&group, nerve_level, &map)?.is_valid();
        let mut image_hit = vec![false; nerve_level.order()];
        for &y in &map {
            image_hit[y] = true;
        }
        let mut map_kernel: Vec<usize> = (0..order).filter(|&x| map[x] == nerve_level.identity()).collect();
        map_kernel.sort_unstable();
        let comparison_exact = is_hom && image_hit.iter().all(|&b| b) && map_kernel == kernel;
        let (quotient_order, isomorphic) = if kernel_normal {
            let q = group.quotient(&kernel, format!("EH{n}xaD"))?;
            (q.group.order(), are_isomorphic(&q.group, nerve_level))
        } else {
            (0, false)
        };
        let faces_commute = n == 0
            || (0..=n).all(|i| {
                (0..order).all(|x| {
                    let lifted = eh.group().face(n, i, x / nd) * nd + x % nd;
                    comparison(xm, &eh, &target, n - 1, lifted) == target.group().face(n, i, map[x])
                })
            });
        levels.push(SemidirectLevel {
            level: n,
            order,
            quotient_order,
            nerve_order: nerve_level.order(),
            kernel_normal,
            comparison_exact,
            isomorphic,
            faces_commute,
        });
    }
    Ok(SemidirectModel { levels })
}

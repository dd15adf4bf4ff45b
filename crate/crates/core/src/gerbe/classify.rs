use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingroup::CrossedModule;
use crate::gerbe::cocycle::{apply_witness, CechLayout, GerbeCocycle, StableWitness};
use crate::parallel::SearchOptions;
use crate::simplicial::search::{BitSet, Problem};

/// Charts allowed without `force`.
pub const DEFAULT_MAX_CHARTS: usize = 5;
/// `|H|·|D|` allowed without `force`.
pub const DEFAULT_MAX_GROUP_PRODUCT: usize = 16;
/// Valid cocycles held in memory at once.
pub const MAX_COCYCLES: usize = 4_000_000;

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    pub search: SearchOptions,
    /// Allow instances beyond the default chart and group-size limits.
    pub force: bool,
}

/// Every valid cocycle on the layout, sorted by [`cocycle_code`].
pub fn enumerate_cocycles(layout: &Arc<CechLayout>, xm: &Arc<CrossedModule>, opts: &SearchOptions) -> Result<Vec<GerbeCocycle>> {
    let (nh, nd) = (xm.h().order(), xm.d().order());
    let mut problem = Problem::new();
    let dv: Vec<usize> = layout.pairs().iter().map(|_| problem.add_var(BitSet::full(nd))).collect();
    let hv: Vec<usize> = layout.triples().iter().map(|_| problem.add_var(BitSet::full(nh))).collect();
    let pair = |a: usize, b: usize| dv[layout.pair(a, b).expect("overlap")];
    let triple = |a: usize, b: usize, c: usize| hv[layout.triple(a, b, c).expect("overlap")];
    for &[a, b, g] in layout.triples() {
        let xm = xm.clone();
        problem.add_check(vec![pair(a, b), pair(b, g), pair(a, g), triple(a, b, g)], move |v| {
            xm.d().mul(v[0], v[1]) == xm.d().mul(xm.alpha(v[3]), v[2])
        });
    }
    for &[a, b, g, q] in layout.quads() {
        let xm = xm.clone();
        problem.add_check(
            vec![triple(a, b, g), triple(a, g, q), triple(b, g, q), triple(a, b, q), pair(a, b)],
            move |v| xm.h().mul(v[0], v[1]) == xm.h().mul(xm.act(v[4], v[2]), v[3]),
        );
    }
    let sols = problem.solve_all(opts)?;
    if sols.solutions.len() > MAX_COCYCLES {
        return Err(Error::budget("cocycles", MAX_COCYCLES as u64));
    }
    let mut cocycles: Vec<GerbeCocycle> = sols
        .solutions
        .into_iter()
        .map(|s| {
            let d = dv.iter().map(|&v| s[v]).collect();
            let h = hv.iter().map(|&v| s[v]).collect();
            GerbeCocycle::from_parts(layout.clone(), xm.clone(), d, h)
        })
        .collect();
    cocycles.sort_by_key(cocycle_code);
    Ok(cocycles)
}

/// Mixed-radix code of the cocycle values, `d` values most significant.
pub fn cocycle_code(c: &GerbeCocycle) -> u128 {
    let (nh, nd) = (c.crossed_module().h().order() as u128, c.crossed_module().d().order() as u128);
    let mut code = 0u128;
    for &x in c.d_values() {
        code = code * nd + x as u128;
    }
    for &x in c.h_values() {
        code = code * nh + x as u128;
    }
    code
}

/// Witnesses changing one chart's `d` or one pair's `h` to a group generator.
pub fn generator_witnesses(layout: &CechLayout, xm: &CrossedModule) -> Vec<StableWitness> {
    let id = StableWitness::identity(layout, xm);
    let mut out = Vec::new();
    for chart in 0..layout.charts() {
        for g in xm.d().generators() {
            let mut w = id.clone();
            w.d[chart] = g;
            out.push(w);
        }
    }
    for p in 0..layout.pairs().len() {
        for g in xm.h().generators() {
            let mut w = id.clone();
            w.h[p] = g;
            out.push(w);
        }
    }
    out
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// A stable-equivalence class.
#[derive(Clone, Debug)]
pub struct GerbeClass {
    /// The member with the smallest code.
    pub representative: GerbeCocycle,
    pub orbit_size: usize,
}

#[derive(Clone, Debug)]
pub struct GerbeClassification {
    pub layout: Arc<CechLayout>,
    pub xm: Arc<CrossedModule>,
    /// All valid cocycles, sorted by code.
    pub cocycles: Vec<GerbeCocycle>,
    /// Class of each cocycle; classes are ordered by representative code.
    pub class_of: Vec<usize>,
    pub classes: Vec<GerbeClass>,
    pub within_default_limits: bool,
}

impl GerbeClassification {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

/// Whether an instance is within the default exhaustive limits.
pub fn within_default_limits(layout: &CechLayout, xm: &CrossedModule) -> bool {
    layout.charts() <= DEFAULT_MAX_CHARTS && xm.h().order() * xm.d().order() <= DEFAULT_MAX_GROUP_PRODUCT
}

/// Enumerates all valid cocycles and partitions them into orbits of the
/// witness action.
///
/// Orbits are the connected components under generator witnesses, since
/// those generate the witness group. Representatives are the members with
/// the smallest code, so the result does not depend on enumeration order.
pub fn classify_gerbes(layout: &Arc<CechLayout>, xm: &Arc<CrossedModule>, opts: &ClassifyOptions) -> Result<GerbeClassification> {
    let within = within_default_limits(layout, xm);
    if !within && !opts.force {
        return Err(Error::BadParameter(format!(
            "{} charts with |H|·|D| = {} exceeds the exhaustive limits ({DEFAULT_MAX_CHARTS} charts, {DEFAULT_MAX_GROUP_PRODUCT}); pass force to run anyway",
            layout.charts(),
            xm.h().order() * xm.d().order()
        )));
    }
    let cocycles = enumerate_cocycles(layout, xm, &opts.search)?;
    let codes: Vec<u128> = cocycles.iter().map(cocycle_code).collect();
    let generators = generator_witnesses(layout, xm);
    let moves: Vec<Result<Vec<usize>>> = opts.search.map(&cocycles, |c| {
        generators
            .iter()
            .map(|w| {
                let image = apply_witness(c, w)?;
                codes
                    .binary_search(&cocycle_code(&image))
                    .map_err(|_| Error::Transcription("witness image missing from the enumeration".into()))
            })
            .collect()
    });
    let mut parent: Vec<usize> = (0..cocycles.len()).collect();
    for (i, targets) in moves.into_iter().enumerate() {
        for j in targets? {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    // Roots are the smallest index, hence smallest code, of each component.
    let mut class_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut class_of = Vec::with_capacity(cocycles.len());
    for i in 0..cocycles.len() {
        let root = find(&mut parent, i);
        let next = class_index.len();
        class_of.push(*class_index.entry(root).or_insert(next));
    }
    let mut classes: Vec<GerbeClass> = class_index
        .keys()
        .map(|&root| GerbeClass {
            representative: cocycles[root].clone(),
            orbit_size: 0,
        })
        .collect();
    for &c in &class_of {
        classes[c].orbit_size += 1;
    }
    Ok(GerbeClassification {
        layout: layout.clone(),
        xm: xm.clone(),
        cocycles,
        class_of,
        classes,
        within_default_limits: within,
    })
}

/// Cocycle values keyed by comma-separated chart tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleValues {
    pub d: BTreeMap<String, usize>,
    pub h: BTreeMap<String, usize>,
}

pub(crate) fn tuple_key(t: &[usize]) -> String {
    t.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl GerbeCocycle {
    pub fn values(&self) -> CocycleValues {
        let layout = self.layout();
        CocycleValues {
            d: layout
                .pairs()
                .iter()
                .zip(self.d_values())
                .map(|(p, &v)| (tuple_key(p), v))
                .collect(),
            h: layout
                .triples()
                .iter()
                .zip(self.h_values())
                .map(|(t, &v)| (tuple_key(t), v))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub representative: CocycleValues,
    pub orbit_size: usize,
}

/// The serializable part of a classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub cover: String,
    pub crossed_module: String,
    pub cocycle_count: usize,
    pub class_count: usize,
    pub classes: Vec<ClassReport>,
    pub exhaustive: bool,
}

impl GerbeClassification {
    pub fn report(&self) -> ClassificationReport {
        ClassificationReport {
            cover: self.layout.cover().name().to_string(),
            crossed_module: self.xm.name().to_string(),
            cocycle_count: self.cocycles.len(),
            class_count: self.classes.len(),
            classes: self
                .classes
                .iter()
                .map(|c| ClassReport {
                    representative: c.representative.values(),
                    orbit_size: c.orbit_size,
                })
                .collect(),
            exhaustive: self.within_default_limits,
        }
    }
}

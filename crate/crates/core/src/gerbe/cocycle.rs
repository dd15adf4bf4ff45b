use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fingroup::CrossedModule;
use crate::report::ValidationReport;
use crate::simplicial::CoverComplex;

/// The increasing pairs, triples and quadruples of a cover, with dense
/// lookup tables from chart tuples to positions.
#[derive(Clone, Debug)]
pub struct CechLayout {
    cover: CoverComplex,
    pairs: Vec<[usize; 2]>,
    triples: Vec<[usize; 3]>,
    quads: Vec<[usize; 4]>,
    pair_index: Vec<usize>,
    triple_index: Vec<usize>,
}

impl CechLayout {
    pub fn new(cover: CoverComplex) -> Self {
        let k = cover.charts();
        let pairs: Vec<[usize; 2]> = cover.tuples(1).iter().map(|t| [t[0], t[1]]).collect();
        let triples: Vec<[usize; 3]> = cover.tuples(2).iter().map(|t| [t[0], t[1], t[2]]).collect();
        let quads: Vec<[usize; 4]> = cover.tuples(3).iter().map(|t| [t[0], t[1], t[2], t[3]]).collect();
        let mut pair_index = vec![usize::MAX; k * k];
        for (i, p) in pairs.iter().enumerate() {
            pair_index[p[0] * k + p[1]] = i;
        }
        let mut triple_index = vec![usize::MAX; k * k * k];
        for (i, t) in triples.iter().enumerate() {
            triple_index[(t[0] * k + t[1]) * k + t[2]] = i;
        }
        Self {
            cover,
            pairs,
            triples,
            quads,
            pair_index,
            triple_index,
        }
    }

    pub fn cover(&self) -> &CoverComplex {
        &self.cover
    }

    pub fn charts(&self) -> usize {
        self.cover.charts()
    }

    pub fn pairs(&self) -> &[[usize; 2]] {
        &self.pairs
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    pub fn quads(&self) -> &[[usize; 4]] {
        &self.quads
    }

    /// Position of the increasing pair `(a, b)`, if it is an overlap.
    pub fn pair(&self, a: usize, b: usize) -> Option<usize> {
        let k = self.charts();
        (a < k && b < k).then(|| self.pair_index[a * k + b]).filter(|&i| i != usize::MAX)
    }

    pub fn triple(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        let k = self.charts();
        (a < k && b < k && c < k)
            .then(|| self.triple_index[(a * k + b) * k + c])
            .filter(|&i| i != usize::MAX)
    }
}

/// A normalized Čech cocycle `{d_αβ, h_αβγ}` on increasing tuples.
#[derive(Clone, Debug)]
pub struct GerbeCocycle {
    layout: Arc<CechLayout>,
    xm: Arc<CrossedModule>,
    d: Vec<usize>,
    h: Vec<usize>,
}

impl PartialEq for GerbeCocycle {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
            && self.h == other.h
            && self.layout.cover == other.layout.cover
            && self.xm.name() == other.xm.name()
    }
}

impl Eq for GerbeCocycle {}

impl GerbeCocycle {
    /// Checks value ranges; see [`validate_cocycle`] for the cocycle conditions.
    pub fn new(layout: Arc<CechLayout>, xm: Arc<CrossedModule>, d: Vec<usize>, h: Vec<usize>) -> Result<Self> {
        if d.len() != layout.pairs.len() || h.len() != layout.triples.len() {
            return Err(Error::structural(format!(
                "cocycle needs {} pair and {} triple values, got {} and {}",
                layout.pairs.len(),
                layout.triples.len(),
                d.len(),
                h.len()
            )));
        }
        if d.iter().any(|&x| x >= xm.d().order()) || h.iter().any(|&x| x >= xm.h().order()) {
            return Err(Error::structural("cocycle value out of range"));
        }
        Ok(Self { layout, xm, d, h })
    }

    pub(crate) fn from_parts(layout: Arc<CechLayout>, xm: Arc<CrossedModule>, d: Vec<usize>, h: Vec<usize>) -> Self {
        Self { layout, xm, d, h }
    }

    pub fn trivial(layout: Arc<CechLayout>, xm: Arc<CrossedModule>) -> Self {
        let d = vec![xm.d().identity(); layout.pairs.len()];
        let h = vec![xm.h().identity(); layout.triples.len()];
        Self { layout, xm, d, h }
    }

    pub fn layout(&self) -> &Arc<CechLayout> {
        &self.layout
    }

    pub fn crossed_module(&self) -> &Arc<CrossedModule> {
        &self.xm
    }

    /// `d` values in the order of [`CechLayout::pairs`].
    pub fn d_values(&self) -> &[usize] {
        &self.d
    }

    /// `h` values in the order of [`CechLayout::triples`].
    pub fn h_values(&self) -> &[usize] {
        &self.h
    }

    /// `d_ab` for an increasing overlapping pair.
    pub fn d(&self, a: usize, b: usize) -> usize {
        self.d[self.layout.pair(a, b).expect("increasing overlapping pair")]
    }

    /// `h_abc` for an increasing overlapping triple.
    pub fn h(&self, a: usize, b: usize, c: usize) -> usize {
        self.h[self.layout.triple(a, b, c).expect("increasing overlapping triple")]
    }

    /// Edge label on an arbitrary ordered pair inside one overlap:
    /// `d_uv` for `u < v`, `e` for `u = v`, and `d_vu⁻¹` for `u > v`.
    pub fn edge(&self, u: usize, v: usize) -> usize {
        let d = self.xm.d();
        match u.cmp(&v) {
            std::cmp::Ordering::Less => self.d(u, v),
            std::cmp::Ordering::Equal => d.identity(),
            std::cmp::Ordering::Greater => d.inv(self.d(v, u)),
        }
    }

    /// Cell label on an arbitrary ordered triple inside one overlap.
    ///
    /// With `m` the smallest chart, `P(u) = edge(m, u)` and `Θ(u, v)` the
    /// 2-cell `h_muv` extended antisymmetrically, the label is
    /// `^{P(u)⁻¹}(Θ(u,v)·Θ(v,w)·Θ(u,w)⁻¹)`. On increasing triples this is
    /// `h_uvw`; on arbitrary ones both compatibility conditions continue to
    /// hold, which [`crate::gerbe::cocycle_to_simplicial_map`] re-checks.
    pub fn cell(&self, u: usize, v: usize, w: usize) -> usize {
        let h = self.xm.h();
        if u < v && v < w {
            return self.h(u, v, w);
        }
        let m = u.min(v).min(w);
        let theta = |a: usize, b: usize| -> usize {
            match a.cmp(&b) {
                std::cmp::Ordering::Equal => h.identity(),
                std::cmp::Ordering::Less if a == m => h.identity(),
                std::cmp::Ordering::Less => self.h(m, a, b),
                std::cmp::Ordering::Greater if b == m => h.identity(),
                std::cmp::Ordering::Greater => h.inv(self.h(m, b, a)),
            }
        };
        let base = self.xm.d().inv(self.edge(m, u));
        let inner = h.product([theta(u, v), theta(v, w), h.inv(theta(u, w))]);
        self.xm.act(base, inner)
    }
}

/// Both cocycle conditions on every increasing triple and quadruple:
/// `d_αβ·d_βγ = α(h_αβγ)·d_αγ` and `h_αβγ·h_αγδ = ^{d_αβ}h_βγδ·h_αβδ`.
pub fn validate_cocycle(c: &GerbeCocycle) -> ValidationReport {
    let (h, d) = (c.xm.h(), c.xm.d());
    let mut report = ValidationReport::new();
    for &[a, b, g] in &c.layout.triples {
        let lhs = d.mul(c.d(a, b), c.d(b, g));
        let rhs = d.mul(c.xm.alpha(c.h(a, b, g)), c.d(a, g));
        if lhs != rhs {
            report.push("edge condition", format!("triple ({a},{b},{g})"));
        }
    }
    for &[a, b, g, q] in &c.layout.quads {
        let lhs = h.mul(c.h(a, b, g), c.h(a, g, q));
        let rhs = h.mul(c.xm.act(c.d(a, b), c.h(b, g, q)), c.h(a, b, q));
        if lhs != rhs {
            report.push("cell condition", format!("quadruple ({a},{b},{g},{q})"));
        }
    }
    report
}

/// A stable-equivalence witness `{d_α, h_αβ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableWitness {
    /// One element of `D` per chart.
    pub d: Vec<usize>,
    /// One element of `H` per increasing overlapping pair.
    pub h: Vec<usize>,
}

impl StableWitness {
    pub fn identity(layout: &CechLayout, xm: &CrossedModule) -> Self {
        Self {
            d: vec![xm.d().identity(); layout.charts()],
            h: vec![xm.h().identity(); layout.pairs.len()],
        }
    }
}

/// The cocycle transformed by a witness:
/// `d'_αβ = d_α·α(h_αβ)·d_αβ·d_β⁻¹` and
/// `h'_αβγ = ^{d_α}h_αβ · ^{d_α d_αβ}h_βγ · ^{d_α}h_αβγ · ^{d_α}h_αγ⁻¹`.
///
/// The output is re-validated; an invalid result is an error.
pub fn apply_witness(c: &GerbeCocycle, w: &StableWitness) -> Result<GerbeCocycle> {
    let out = apply_witness_unchecked(c, w)?;
    let report = validate_cocycle(&out);
    if !report.is_valid() {
        return Err(Error::Transcription(format!("witness produced an invalid cocycle: {report}")));
    }
    Ok(out)
}

pub(crate) fn apply_witness_unchecked(c: &GerbeCocycle, w: &StableWitness) -> Result<GerbeCocycle> {
    let layout = &c.layout;
    if w.d.len() != layout.charts() || w.h.len() != layout.pairs.len() {
        return Err(Error::structural("witness does not match the cover"));
    }
    let xm = &c.xm;
    let (h, d) = (xm.h(), xm.d());
    let wh = |a: usize, b: usize| w.h[layout.pair(a, b).expect("overlap")];
    let new_d = layout
        .pairs
        .iter()
        .map(|&[a, b]| d.product([w.d[a], xm.alpha(wh(a, b)), c.d(a, b), d.inv(w.d[b])]))
        .collect();
    let new_h = layout
        .triples
        .iter()
        .map(|&[a, b, g]| {
            let da = w.d[a];
            h.product([
                xm.act(da, wh(a, b)),
                xm.act(d.mul(da, c.d(a, b)), wh(b, g)),
                xm.act(da, c.h(a, b, g)),
                xm.act(da, h.inv(wh(a, g))),
            ])
        })
        .collect();
    Ok(GerbeCocycle::from_parts(layout.clone(), xm.clone(), new_d, new_h))
}

/// `second ∘ first`: the witness whose action equals applying `first`, then
/// `second`. Charts compose as `b_α a_α` and pairs as `^{a_α⁻¹}l_αβ · k_αβ`.
pub fn compose_witnesses(xm: &CrossedModule, layout: &CechLayout, first: &StableWitness, second: &StableWitness) -> StableWitness {
    let (h, d) = (xm.h(), xm.d());
    StableWitness {
        d: first.d.iter().zip(&second.d).map(|(&a, &b)| d.mul(b, a)).collect(),
        h: layout
            .pairs
            .iter()
            .enumerate()
            .map(|(i, &[alpha, _])| h.mul(xm.act(d.inv(first.d[alpha]), second.h[i]), first.h[i]))
            .collect(),
    }
}

/// The pullback along a chart map of covers: `d'_ab = edge(f(a), f(b))`
/// and `h'_abc = cell(f(a), f(b), f(c))`, so non-monotone chart maps are
/// allowed. The result is re-validated.
pub fn pullback_cocycle(c: &GerbeCocycle, source: Arc<CechLayout>, chart_map: &[usize]) -> Result<GerbeCocycle> {
    if !source.cover().is_admissible_map(c.layout.cover(), chart_map) {
        return Err(Error::BadParameter(
            "chart map does not send every overlap to an overlap".into(),
        ));
    }
    let d = source
        .pairs
        .iter()
        .map(|&[a, b]| c.edge(chart_map[a], chart_map[b]))
        .collect();
    let h = source
        .triples
        .iter()
        .map(|&[a, b, g]| c.cell(chart_map[a], chart_map[b], chart_map[g]))
        .collect();
    let out = GerbeCocycle::from_parts(source, c.xm.clone(), d, h);
    let report = validate_cocycle(&out);
    if !report.is_valid() {
        return Err(Error::Transcription(format!("pullback produced an invalid cocycle: {report}")));
    }
    Ok(out)
}

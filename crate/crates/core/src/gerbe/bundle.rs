use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fingroup::CrossedModule;
use crate::gerbe::cocycle::CechLayout;
use crate::parallel::SearchOptions;
use crate::report::ValidationReport;
use crate::simplicial::search::{BitSet, Problem};

/// Local data of a principal bundle for the groupoid of a crossed module:
/// an object `d_a` per chart and a morphism `g_ab: d_b → d_a` per overlap.
#[derive(Clone, Debug)]
pub struct CMBundleCocycle {
    layout: Arc<CechLayout>,
    xm: Arc<CrossedModule>,
    d: Vec<usize>,
    g: Vec<usize>,
}

impl PartialEq for CMBundleCocycle {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.g == other.g
    }
}

impl Eq for CMBundleCocycle {}

impl CMBundleCocycle {
    /// Range-checked; see [`validate_bundle`] for the cocycle conditions.
    pub fn new(layout: Arc<CechLayout>, xm: Arc<CrossedModule>, d: Vec<usize>, g: Vec<usize>) -> Result<Self> {
        if d.len() != layout.charts() || g.len() != layout.pairs().len() {
            return Err(Error::structural("bundle data does not match the cover"));
        }
        if d.iter().any(|&x| x >= xm.d().order()) || g.iter().any(|&x| x >= xm.h().order()) {
            return Err(Error::structural("bundle value out of range"));
        }
        Ok(Self { layout, xm, d, g })
    }

    pub fn trivial(layout: Arc<CechLayout>, xm: Arc<CrossedModule>) -> Self {
        let d = vec![xm.d().identity(); layout.charts()];
        let g = vec![xm.h().identity(); layout.pairs().len()];
        Self { layout, xm, d, g }
    }

    pub fn layout(&self) -> &Arc<CechLayout> {
        &self.layout
    }

    pub fn d_values(&self) -> &[usize] {
        &self.d
    }

    pub fn g_values(&self) -> &[usize] {
        &self.g
    }

    pub fn g(&self, a: usize, b: usize) -> usize {
        self.g[self.layout.pair(a, b).expect("increasing overlapping pair")]
    }
}

/// `α(g_ab)·d_b = d_a` on pairs and `g_ab·g_bc = g_ac` on triples.
pub fn validate_bundle(b: &CMBundleCocycle) -> ValidationReport {
    let (h, d) = (b.xm.h(), b.xm.d());
    let mut report = ValidationReport::new();
    for (i, &[x, y]) in b.layout.pairs().iter().enumerate() {
        if d.mul(b.xm.alpha(b.g[i]), b.d[y]) != b.d[x] {
            report.push("morphism endpoints", format!("pair ({x},{y})"));
        }
    }
    for &[x, y, z] in b.layout.triples() {
        if h.mul(b.g(x, y), b.g(y, z)) != b.g(x, z) {
            report.push("composition", format!("triple ({x},{y},{z})"));
        }
    }
    report
}

/// Pointwise horizontal composition: `d''_a = d_a·d'_a` and
/// `g''_ab = g_ab·^{d_b}g'_ab`. The result is re-validated.
pub fn bundle_product(first: &CMBundleCocycle, second: &CMBundleCocycle) -> Result<CMBundleCocycle> {
    if first.layout.cover() != second.layout.cover() || first.xm.name() != second.xm.name() {
        return Err(Error::BadParameter("bundles live on different covers or crossed modules".into()));
    }
    let xm = &first.xm;
    let d = first.d.iter().zip(&second.d).map(|(&x, &y)| xm.d().mul(x, y)).collect();
    let g = first
        .layout
        .pairs()
        .iter()
        .enumerate()
        .map(|(i, &[_, b])| xm.h().mul(first.g[i], xm.act(first.d[b], second.g[i])))
        .collect();
    let out = CMBundleCocycle {
        layout: first.layout.clone(),
        xm: xm.clone(),
        d,
        g,
    };
    let report = validate_bundle(&out);
    if !report.is_valid() {
        return Err(Error::Transcription(format!("bundle product is invalid: {report}")));
    }
    Ok(out)
}

/// Every valid bundle cocycle on the layout, in lexicographic order of
/// `(d, g)`.
pub fn enumerate_bundles(layout: &Arc<CechLayout>, xm: &Arc<CrossedModule>, opts: &SearchOptions) -> Result<Vec<CMBundleCocycle>> {
    let mut problem = Problem::new();
    let dv: Vec<usize> = (0..layout.charts()).map(|_| problem.add_var(BitSet::full(xm.d().order()))).collect();
    let gv: Vec<usize> = layout.pairs().iter().map(|_| problem.add_var(BitSet::full(xm.h().order()))).collect();
    for (i, &[x, y]) in layout.pairs().iter().enumerate() {
        let xm = xm.clone();
        problem.add_check(vec![gv[i], dv[y], dv[x]], move |v| xm.d().mul(xm.alpha(v[0]), v[1]) == v[2]);
    }
    for &[x, y, z] in layout.triples() {
        let xm = xm.clone();
        let pair = |a, b| gv[layout.pair(a, b).expect("overlap")];
        problem.add_check(vec![pair(x, y), pair(y, z), pair(x, z)], move |v| xm.h().mul(v[0], v[1]) == v[2]);
    }
    let mut out: Vec<CMBundleCocycle> = problem
        .solve_all(opts)?
        .solutions
        .into_iter()
        .map(|s| CMBundleCocycle {
            layout: layout.clone(),
            xm: xm.clone(),
            d: dv.iter().map(|&v| s[v]).collect(),
            g: gv.iter().map(|&v| s[v]).collect(),
        })
        .collect();
    out.sort_by(|a, b| (&a.d, &a.g).cmp(&(&b.d, &b.g)));
    Ok(out)
}

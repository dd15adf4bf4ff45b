use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fingroup::CrossedModule;
use crate::gerbe::cocycle::{validate_cocycle, GerbeCocycle};
use crate::gerbe::smith::{abelian_oracle, is_coboundary, AbelianBasis, CohomologyGroup};
use crate::simplicial::search::{BitSet, Problem};

/// The obstruction cochain of a lift, with values in `ker α`.
#[derive(Clone, Debug, Serialize)]
pub struct Obstruction {
    /// One element of `H` per increasing quadruple, all in `ker α`.
    pub cochain: Vec<usize>,
    /// Whether the cochain is a coboundary, i.e. the class vanishes.
    pub trivial: bool,
    /// The group the class lives in.
    pub cohomology: CohomologyGroup,
}

#[derive(Clone, Debug)]
pub struct LiftResult {
    /// A cocycle for the target module with the same `d` values.
    pub lift: Option<GerbeCocycle>,
    /// Present when `D` acts trivially on `ker α`.
    pub obstruction: Option<Obstruction>,
}

impl LiftResult {
    pub fn is_lifted(&self) -> bool {
        self.lift.is_some()
    }

    /// Whether the search and the obstruction class agree; `None` when no
    /// class was computed.
    pub fn agrees(&self) -> Option<bool> {
        self.obstruction.as_ref().map(|o| o.trivial == self.lift.is_some())
    }
}

/// Lifts a cocycle for `(Im α → D)` to one for `(H → D)`, keeping the `d`
/// values and choosing each `h` in the fibre of `α` over the old value.
///
/// The lift is found by exhaustive search. When `D` acts trivially on
/// `ker α` the obstruction `(ĥ_abc·ĥ_acd)·(^{d_ab}ĥ_bcd·ĥ_abd)⁻¹` of an
/// arbitrary fibrewise choice `ĥ` is also computed and tested for being a
/// coboundary; a lift exists exactly when it is.
pub fn lift_gerbe(c: &GerbeCocycle, xm: &Arc<CrossedModule>, budget: u64) -> Result<LiftResult> {
    let base = c.crossed_module();
    if base.d().table() != xm.d().table() {
        return Err(Error::BadParameter("cocycle and target have different D".into()));
    }
    let mut image = xm.image().embedding;
    image.sort_unstable();
    let mut base_image: Vec<usize> = base.alpha_map().to_vec();
    base_image.sort_unstable();
    base_image.dedup();
    if base_image.len() != base.h().order() || base_image != image {
        return Err(Error::BadParameter("cocycle is not for the image of the target's α".into()));
    }
    let report = validate_cocycle(c);
    if !report.is_valid() {
        return Err(Error::InvalidCocycle(report));
    }

    let layout = c.layout().clone();
    let fibres = xm.alpha_fibres();
    let targets: Vec<usize> = c.h_values().iter().map(|&x| base.alpha(x)).collect();
    let d_values = c.d_values().to_vec();

    let mut problem = Problem::new();
    let vars: Vec<usize> = targets
        .iter()
        .map(|&t| problem.add_var(BitSet::from_values(xm.h().order(), fibres[t].iter().copied())))
        .collect();
    let triple = |a: usize, b: usize, g: usize| vars[layout.triple(a, b, g).expect("overlap")];
    for &[a, b, g, q] in layout.quads() {
        let xm = xm.clone();
        let dab = d_values[layout.pair(a, b).expect("overlap")];
        problem.add_check(
            vec![triple(a, b, g), triple(a, g, q), triple(b, g, q), triple(a, b, q)],
            move |v| xm.h().mul(v[0], v[1]) == xm.h().mul(xm.act(dab, v[2]), v[3]),
        );
    }
    let lift = match problem.solve_first(budget)? {
        Some(s) => {
            let h = vars.iter().map(|&v| s[v]).collect();
            let lifted = GerbeCocycle::new(layout.clone(), xm.clone(), d_values.clone(), h)?;
            let report = validate_cocycle(&lifted);
            if !report.is_valid() {
                return Err(Error::Transcription(format!("lift search returned an invalid cocycle: {report}")));
            }
            Some(lifted)
        }
        None => None,
    };

    let obstruction = if xm.acts_trivially_on_kernel() {
        let section: Vec<usize> = targets.iter().map(|&t| fibres[t][0]).collect();
        let hat = |a: usize, b: usize, g: usize| section[layout.triple(a, b, g).expect("overlap")];
        let h = xm.h();
        let cochain: Vec<usize> = layout
            .quads()
            .iter()
            .map(|&[a, b, g, q]| {
                let dab = d_values[layout.pair(a, b).expect("overlap")];
                let lhs = h.mul(hat(a, b, g), hat(a, g, q));
                let rhs = h.mul(xm.act(dab, hat(b, g, q)), hat(a, b, q));
                h.mul(lhs, h.inv(rhs))
            })
            .collect();
        let kernel = xm.kernel();
        let mut index = vec![usize::MAX; h.order()];
        for (i, &x) in kernel.embedding.iter().enumerate() {
            index[x] = i;
        }
        let local: Vec<usize> = cochain.iter().map(|&x| index[x]).collect();
        if local.contains(&usize::MAX) {
            return Err(Error::Transcription("obstruction left ker α".into()));
        }
        let basis = AbelianBasis::new(&kernel.group)?;
        let cohomology = abelian_oracle(layout.cover(), &kernel.group, 3)?.group;
        Some(Obstruction {
            trivial: is_coboundary(layout.cover(), &basis, 3, &local),
            cochain,
            cohomology,
        })
    } else {
        None
    };
    Ok(LiftResult { lift, obstruction })
}

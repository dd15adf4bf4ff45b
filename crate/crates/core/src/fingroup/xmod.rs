use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingroup::{check_hom, FiniteGroup, GroupAction, GroupHom, GroupJson, Quotient, Subgroup};
use crate::report::ValidationReport;

/// A crossed module `α: H → D` with an action of `D` on `H`.
///
/// Instances are only built through validation, so every value of this type
/// satisfies the Peiffer identity `ᵅ⁽ʰ⁾h' = h h' h⁻¹` and equivariance
/// `α(ᵈh) = d α(h) d⁻¹`.
#[derive(Clone, Debug)]
pub struct CrossedModule {
    name: String,
    h: Arc<FiniteGroup>,
    d: Arc<FiniteGroup>,
    alpha: Vec<usize>,
    action: GroupAction,
}

/// Checks the crossed-module axioms exhaustively.
///
/// Dimension mismatches are reported as `Err(Structural)`; axiom failures
/// come back inside the report.
pub fn validate_crossed_module(
    h: &FiniteGroup,
    d: &FiniteGroup,
    alpha: &[usize],
    action: &[usize],
) -> Result<ValidationReport> {
    let mut report = check_hom(h, d, alpha)?;
    if !report.is_valid() {
        report.violations[0].rule = "alpha homomorphism".into();
    }
    let action = GroupAction::unchecked(d, h, action.to_vec())?;
    report.extend(action.check(d, h));

    'peiffer: for x in h.elements() {
        for y in h.elements() {
            if action.act(alpha[x], y) != h.conj(x, y) {
                report.push("Peiffer", format!("h={x}, h'={y}: ᵅ⁽ʰ⁾h' ≠ hh'h⁻¹"));
                break 'peiffer;
            }
        }
    }
    'equiv: for g in d.elements() {
        for x in h.elements() {
            if alpha[action.act(g, x)] != d.conj(g, alpha[x]) {
                report.push("equivariance", format!("d={g}, h={x}: α(ᵈh) ≠ dα(h)d⁻¹"));
                break 'equiv;
            }
        }
    }
    Ok(report)
}

impl CrossedModule {
    pub fn new(
        name: impl Into<String>,
        h: FiniteGroup,
        d: FiniteGroup,
        alpha: Vec<usize>,
        action: Vec<usize>,
    ) -> Result<Self> {
        let report = validate_crossed_module(&h, &d, &alpha, &action)?;
        if !report.is_valid() {
            return Err(Error::InvalidCrossedModule(report));
        }
        let action = GroupAction::unchecked(&d, &h, action)?;
        Ok(Self {
            name: name.into(),
            h: Arc::new(h),
            d: Arc::new(d),
            alpha,
            action,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn d(&self) -> &FiniteGroup {
        &self.d
    }

    pub fn h_arc(&self) -> Arc<FiniteGroup> {
        self.h.clone()
    }

    pub fn d_arc(&self) -> Arc<FiniteGroup> {
        self.d.clone()
    }

    #[inline]
    pub fn alpha(&self, x: usize) -> usize {
        self.alpha[x]
    }

    pub fn alpha_map(&self) -> &[usize] {
        &self.alpha
    }

    /// `ᵈh`
    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action.act(g, x)
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn alpha_hom(&self) -> GroupHom {
        GroupHom::new_trusted(self.h.clone(), self.d.clone(), self.alpha.clone())
    }

    /// `|H| · |D|`, the size measure used by enumeration budgets.
    pub fn size(&self) -> usize {
        self.h.order() * self.d.order()
    }

    /// Elements of `H` in each fibre of `α`, indexed by `D`.
    pub fn alpha_fibres(&self) -> Vec<Vec<usize>> {
        let mut fibres = vec![Vec::new(); self.d.order()];
        for x in self.h.elements() {
            fibres[self.alpha[x]].push(x);
        }
        fibres
    }

    pub fn kernel(&self) -> Subgroup {
        self.alpha_hom().kernel()
    }

    pub fn image(&self) -> Subgroup {
        self.alpha_hom().image()
    }

    /// Always succeeds for a valid crossed module: equivariance makes
    /// `α(H)` normal in `D`.
    pub fn cokernel(&self) -> Quotient {
        self.alpha_hom()
            .cokernel()
            .expect("image of α is normal by equivariance")
    }

    /// Whether `D` acts trivially on `ker α`.
    pub fn acts_trivially_on_kernel(&self) -> bool {
        let k = self.kernel();
        self.d
            .elements()
            .all(|g| k.embedding.iter().all(|&x| self.act(g, x) == x))
    }

    /// The four crossed modules of the two short exact sequences attached to
    /// `(H → D)`.
    pub fn derived(&self) -> DerivedModules {
        let image = self.image();
        let coker = self.cokernel();
        let kernel = self.kernel();

        // (H → Im α), Im α acting by restriction.
        let h_to_image = {
            let mut index = vec![usize::MAX; self.d.order()];
            for (i, &x) in image.embedding.iter().enumerate() {
                index[x] = i;
            }
            let alpha = self.h.elements().map(|x| index[self.alpha[x]]).collect();
            let action = image
                .embedding
                .iter()
                .flat_map(|&g| self.h.elements().map(move |x| (g, x)))
                .map(|(g, x)| self.act(g, x))
                .collect();
            CrossedModule::new(
                format!("({} -> Im)", self.h.name()),
                (*self.h).clone(),
                image.group.clone(),
                alpha,
                action,
            )
            .expect("(H → Im α) is a crossed module")
        };

        let one_to_coker = CrossedModule::unit(coker.group.clone());

        let ker_to_one = CrossedModule::new(
            format!("(ker -> 1)"),
            kernel.group.clone(),
            FiniteGroup::trivial(),
            vec![0; kernel.group.order()],
            kernel.group.elements().collect(),
        )
        .expect("ker α is central, hence abelian");

        // (Im α → D), D acting by conjugation.
        let image_to_d = {
            let mut index = vec![usize::MAX; self.d.order()];
            for (i, &x) in image.embedding.iter().enumerate() {
                index[x] = i;
            }
            let action = self
                .d
                .elements()
                .flat_map(|g| image.embedding.iter().map(move |&x| (g, x)))
                .map(|(g, x)| index[self.d.conj(g, x)])
                .collect();
            CrossedModule::new(
                format!("(Im -> {})", self.d.name()),
                image.group.clone(),
                (*self.d).clone(),
                image.embedding.clone(),
                action,
            )
            .expect("(Im α → D) with conjugation is a crossed module")
        };

        DerivedModules {
            h_to_image,
            one_to_coker,
            ker_to_one,
            image_to_d,
            image,
            kernel,
            cokernel: coker,
        }
    }

    /// `(1 → G)`.
    pub fn unit(g: FiniteGroup) -> Self {
        let name = format!("(1 -> {})", g.name());
        CrossedModule::new(name, FiniteGroup::trivial(), g.clone(), vec![g.identity()], vec![0; g.order()])
            .expect("(1 → G) is a crossed module")
    }

    /// `(G → G)` with identity map and conjugation action.
    pub fn identity(g: FiniteGroup) -> Self {
        let alpha = g.elements().collect();
        let action = g
            .elements()
            .flat_map(|a| g.elements().map(move |b| (a, b)))
            .map(|(a, b)| g.conj(a, b))
            .collect();
        let name = format!("({0} -> {0})", g.name());
        CrossedModule::new(name, g.clone(), g, alpha, action).expect("(G → G, conj) is a crossed module")
    }

    pub fn to_json(&self) -> XmodJson {
        XmodJson {
            name: Some(self.name.clone()),
            h: self.h.to_json(),
            d: self.d.to_json(),
            alpha: self.alpha.clone(),
            action: self.action.rows().map(|r| r.to_vec()).collect(),
        }
    }

    pub fn from_json(json: &XmodJson) -> Result<Self> {
        let h = FiniteGroup::from_json(&json.h)?;
        let d = FiniteGroup::from_json(&json.d)?;
        if json.action.len() != d.order() || json.action.iter().any(|r| r.len() != h.order()) {
            return Err(Error::structural(format!(
                "action must be a {}×{} table",
                d.order(),
                h.order()
            )));
        }
        let name = json
            .name
            .clone()
            .unwrap_or_else(|| format!("({} -> {})", h.name(), d.name()));
        CrossedModule::new(name, h, d, json.alpha.clone(), json.action.concat())
    }
}

/// The output of [`CrossedModule::derived`], with the subgroup data the
/// exact sequences need.
#[derive(Clone, Debug)]
pub struct DerivedModules {
    pub h_to_image: CrossedModule,
    pub one_to_coker: CrossedModule,
    pub ker_to_one: CrossedModule,
    pub image_to_d: CrossedModule,
    pub image: Subgroup,
    pub kernel: Subgroup,
    pub cokernel: Quotient,
}

impl DerivedModules {
    pub fn all(&self) -> [&CrossedModule; 4] {
        [&self.h_to_image, &self.one_to_coker, &self.ker_to_one, &self.image_to_d]
    }
}

/// On-disk form: `{"H": group, "D": group, "alpha": [int], "action": [[int]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct XmodJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "H")]
    pub h: GroupJson,
    #[serde(rename = "D")]
    pub d: GroupJson,
    pub alpha: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::presets::{cyclic, symmetric};

    #[test]
    fn inversion_action_breaks_peiffer_only() {
        let h = cyclic(4);
        let d = cyclic(2);
        let alpha = vec![0, 1, 0, 1];
        // d = 1 acts by inversion
        let action = vec![0, 1, 2, 3, 0, 3, 2, 1];
        let report = validate_crossed_module(&h, &d, &alpha, &action).unwrap();
        assert_eq!(report.rules(), vec!["Peiffer"]);
    }

    #[test]
    fn structural_error_is_not_an_axiom_violation() {
        let h = cyclic(4);
        let d = cyclic(2);
        let err = validate_crossed_module(&h, &d, &[0, 1, 0], &[0; 8]).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
        let err = validate_crossed_module(&h, &d, &[0, 1, 0, 1], &[0; 7]).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }

    #[test]
    fn identity_module_derived() {
        let xm = CrossedModule::identity(symmetric(3));
        let der = xm.derived();
        assert_eq!(der.h_to_image.h().order(), 6);
        assert_eq!(der.h_to_image.d().order(), 6);
        assert_eq!(der.one_to_coker.d().order(), 1);
        assert_eq!(der.ker_to_one.h().order(), 1);
        assert_eq!(der.image_to_d.h().order(), 6);
    }

    #[test]
    fn json_round_trip() {
        let xm = CrossedModule::identity(cyclic(3));
        let text = serde_json::to_string(&xm.to_json()).unwrap();
        let back = CrossedModule::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.alpha_map(), xm.alpha_map());
        assert_eq!(back.action(), xm.action());
    }
}

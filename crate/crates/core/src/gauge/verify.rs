use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge::cases::{builtin_case, Params};
use crate::gauge::checks::{check_bfield, check_connection, check_gerbe_cocycle_smooth, curvature_and_nu, NU_GLUING};
use crate::gauge::data::{form, Connection, Field, Form, GaugeChartData, Residual};
use crate::gauge::matrix::{compute_t, so3_hat, MatrixCrossedModule};

/// Residuals at or below this are rounding noise and excluded from the
/// step-halving ratio.
pub const CONVERGENCE_FLOOR: f64 = 1e-11;
/// Minimum residual reduction when the step is halved.
pub const MIN_HALVING_RATIO: f64 = 3.5;

/// Default tolerance by base dimension.
pub fn default_tolerance(dim: usize) -> f64 {
    if dim == 1 {
        1e-6
    } else {
        1e-4
    }
}

/// A gauge case file: a bundled field family with parameters and optional
/// step and tolerance overrides.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GaugeJson {
    pub case: String,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl GaugeJson {
    pub fn named(case: &str) -> Self {
        Self {
            case: case.to_string(),
            ..Self::default()
        }
    }

    pub fn chart_data(&self) -> Result<GaugeChartData> {
        let mut data = builtin_case(&self.case, &self.params)?;
        if let Some(step) = self.fd_step {
            data.fd_step = step;
        }
        if let Some(step) = self.t_step {
            data.t_step = step;
        }
        Ok(data)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquationCheck {
    pub check: String,
    pub equation: String,
    pub samples: usize,
    pub max: f64,
    pub rms: f64,
    pub max_at_half_step: f64,
    /// `max / max_at_half_step`, when `max` is above the rounding floor.
    pub halving_ratio: Option<f64>,
    /// Whether the equation is expected to hold on this data.
    pub asserted: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TCheck {
    pub samples: usize,
    pub seed: u64,
    pub t_step: f64,
    pub max_error: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeReport {
    pub case: String,
    pub crossed_module: Option<String>,
    pub base_dim: Option<usize>,
    pub fd_step: Option<f64>,
    pub tolerance: f64,
    pub equations: Vec<EquationCheck>,
    pub t_check: Option<TCheck>,
    pub passed: bool,
}

/// Residual groups evaluated by [`verify`], by check name.
pub fn all_residuals(data: &GaugeChartData) -> Result<Vec<(&'static str, Residual)>> {
    let mut out = vec![("cocycle", check_gerbe_cocycle_smooth(data)?)];
    if data.connection.is_some() {
        out.push(("connection", check_connection(data)?));
        out.push(("curvature", curvature_and_nu(data)?.residual));
    }
    if data.bfield.is_some() {
        out.push(("bfield", check_bfield(data)?));
    }
    Ok(out)
}

/// Runs every applicable check at the configured step and at half of it.
pub fn verify(data: &GaugeChartData, tolerance: f64) -> Result<GaugeReport> {
    let coarse = all_residuals(data)?;
    let fine = all_residuals(&data.with_fd_step(data.fd_step / 2.0))?;
    let mut equations = Vec::new();
    for ((check, at_step), (_, at_half)) in coarse.iter().zip(&fine) {
        for (eq, half) in at_step.equations.iter().zip(&at_half.equations) {
            let asserted = eq.equation != NU_GLUING || data.xm.is_h_abelian();
            let halving_ratio = (eq.max > CONVERGENCE_FLOOR).then(|| eq.max / half.max);
            let converges = halving_ratio.map_or(true, |r| r >= MIN_HALVING_RATIO);
            equations.push(EquationCheck {
                check: check.to_string(),
                equation: eq.equation.clone(),
                samples: eq.samples.len(),
                max: eq.max,
                rms: eq.rms,
                max_at_half_step: half.max,
                halving_ratio,
                asserted,
                passed: !asserted || (eq.max < tolerance && converges),
            });
        }
    }
    let passed = equations.iter().all(|e| e.passed);
    Ok(GaugeReport {
        case: data.name.clone(),
        crossed_module: Some(data.xm.name().to_string()),
        base_dim: Some(data.base.dim()),
        fd_step: Some(data.fd_step),
        tolerance,
        equations,
        t_check: None,
        passed,
    })
}

/// Compares the finite-difference `T_X(h)` for `(SO(3) → SO(3))` with
/// `h X h⁻¹ − X` at seeded random `h = exp(v̂)`, `X = ŵ`.
pub fn conjugation_t_check(samples: usize, seed: u64, t_step: f64, tolerance: f64) -> TCheck {
    let xm = MatrixCrossedModule::so3_conjugation();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vector = |scale: f64| [0; 3].map(|_| rng.gen_range(-scale..scale));
    let mut max_error = 0.0f64;
    for _ in 0..samples {
        let h = so3_hat(vector(std::f64::consts::PI)).exp();
        let x = so3_hat(vector(1.0));
        let closed = &h * &x * h.transpose() - &x;
        max_error = max_error.max((compute_t(&x, &h, &xm, t_step) - closed).norm());
    }
    TCheck {
        samples,
        seed,
        t_step,
        max_error,
        passed: max_error < tolerance,
    }
}

/// Runs a case file: chart cases through [`verify`], `so3-conjugation`
/// through [`conjugation_t_check`] (parameters `samples`, `seed`).
pub fn run_case(case: &GaugeJson) -> Result<GaugeReport> {
    if case.case == "so3-conjugation" {
        let samples = case.params.get("samples").copied().unwrap_or(100.0);
        let seed = case.params.get("seed").copied().unwrap_or(7.0);
        if samples < 1.0 || samples.fract() != 0.0 || seed < 0.0 || seed.fract() != 0.0 {
            return Err(Error::BadParameter("samples and seed must be non-negative integers".into()));
        }
        let tolerance = case.tolerance.unwrap_or(1e-6);
        let t = conjugation_t_check(samples as usize, seed as u64, case.t_step.unwrap_or(1e-4), tolerance);
        return Ok(GaugeReport {
            case: case.case.clone(),
            crossed_module: Some(MatrixCrossedModule::so3_conjugation().name().to_string()),
            base_dim: None,
            fd_step: None,
            tolerance,
            equations: Vec::new(),
            passed: t.passed,
            t_check: Some(t),
        });
    }
    let data = case.chart_data()?;
    let tolerance = case.tolerance.unwrap_or_else(|| default_tolerance(data.base.dim()));
    verify(&data, tolerance)
}

/// Simplicial-side labels of a connection on the cover nerve: `τ₁ = d_αβ`,
/// `τ₂ = h_αβγ`, `A₀ = A_α`, `a₀₁ = −a_αβ`.
#[derive(Clone)]
pub struct SimplicialConnection {
    pub tau1: BTreeMap<[usize; 2], Field>,
    pub tau2: BTreeMap<[usize; 3], Field>,
    pub a0: Vec<Form>,
    pub a01: BTreeMap<[usize; 2], Form>,
}

fn negate(f: &Form) -> Form {
    let f = f.clone();
    form(move |p| f(p).into_iter().map(|m| -m).collect())
}

impl SimplicialConnection {
    pub fn from_chart_data(data: &GaugeChartData) -> Result<Self> {
        let conn = data.connection.as_ref().ok_or_else(|| Error::MissingData("connection".into()))?;
        Ok(Self {
            tau1: data.d.clone(),
            tau2: data.h.clone(),
            a0: conn.chart.clone(),
            a01: conn.pair.iter().map(|(k, f)| (*k, negate(f))).collect(),
        })
    }

    /// The chart data with these labels, keeping base, crossed module,
    /// B-field and steps from `template`.
    pub fn to_chart_data(&self, template: &GaugeChartData) -> GaugeChartData {
        GaugeChartData {
            d: self.tau1.clone(),
            h: self.tau2.clone(),
            connection: Some(Connection {
                chart: self.a0.clone(),
                pair: self.a01.iter().map(|(k, f)| (*k, negate(f))).collect(),
            }),
            ..template.clone()
        }
    }
}

/// The local-connection conditions in simplicial labels.
pub fn check_simplicial_connection(sc: &SimplicialConnection, template: &GaugeChartData) -> Result<Residual> {
    check_connection(&sc.to_chart_data(template))
}

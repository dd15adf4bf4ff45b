use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauge::base::BaseModel;
use crate::gauge::matrix::{Mat, MatrixCrossedModule};

/// A group-valued function on parameter space.
pub type Field = Arc<dyn Fn(&[f64]) -> Mat + Send + Sync>;

/// A matrix-valued form: one matrix per component (coordinate directions
/// for 1-forms, increasing coordinate pairs for 2-forms).
pub type Form = Arc<dyn Fn(&[f64]) -> Vec<Mat> + Send + Sync>;

pub fn field(f: impl Fn(&[f64]) -> Mat + Send + Sync + 'static) -> Field {
    Arc::new(f)
}

pub fn form(f: impl Fn(&[f64]) -> Vec<Mat> + Send + Sync + 'static) -> Form {
    Arc::new(f)
}

/// `{A_α, a_αβ}`: `A_α` is Lie(D)-valued, `a_αβ` Lie(H)-valued.
#[derive(Clone)]
pub struct Connection {
    pub chart: Vec<Form>,
    pub pair: BTreeMap<[usize; 2], Form>,
}

/// `{B_α, δ_αβ}`, both Lie(H)-valued 2-forms.
#[derive(Clone)]
pub struct BField {
    pub chart: Vec<Form>,
    pub pair: BTreeMap<[usize; 2], Form>,
}

/// Transition data, connection and B-field of a gerbe on sampled charts.
#[derive(Clone)]
pub struct GaugeChartData {
    pub name: String,
    pub xm: MatrixCrossedModule,
    pub base: BaseModel,
    pub d: BTreeMap<[usize; 2], Field>,
    pub h: BTreeMap<[usize; 3], Field>,
    pub connection: Option<Connection>,
    pub bfield: Option<BField>,
    /// Step of the central differences in parameter space.
    pub fd_step: f64,
    /// Step of the central difference defining `T_X(h)`.
    pub t_step: f64,
}

impl std::fmt::Debug for GaugeChartData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaugeChartData")
            .field("name", &self.name)
            .field("xm", &self.xm)
            .field("base", &self.base)
            .field("fd_step", &self.fd_step)
            .field("t_step", &self.t_step)
            .finish_non_exhaustive()
    }
}

impl GaugeChartData {
    pub fn with_fd_step(&self, step: f64) -> Self {
        Self {
            fd_step: step,
            ..self.clone()
        }
    }

    pub(crate) fn pairs(&self) -> Vec<[usize; 2]> {
        self.base.overlaps(2).into_iter().map(|t| [t[0], t[1]]).collect()
    }

    pub(crate) fn triples(&self) -> Vec<[usize; 3]> {
        self.base.overlaps(3).into_iter().map(|t| [t[0], t[1], t[2]]).collect()
    }

    pub(crate) fn quadruples(&self) -> Vec<[usize; 4]> {
        self.base
            .overlaps(4)
            .into_iter()
            .map(|t| [t[0], t[1], t[2], t[3]])
            .collect()
    }

    pub(crate) fn d_at(&self, pair: [usize; 2]) -> Result<&Field> {
        self.d
            .get(&pair)
            .ok_or_else(|| Error::MissingData(format!("d on overlap {pair:?}")))
    }

    pub(crate) fn h_at(&self, triple: [usize; 3]) -> Result<&Field> {
        self.h
            .get(&triple)
            .ok_or_else(|| Error::MissingData(format!("h on overlap {triple:?}")))
    }

    pub(crate) fn connection(&self) -> Result<&Connection> {
        self.connection
            .as_ref()
            .ok_or_else(|| Error::MissingData("connection".into()))
    }

    pub(crate) fn bfield(&self) -> Result<&BField> {
        self.bfield.as_ref().ok_or_else(|| Error::MissingData("B-field".into()))
    }

    /// Central difference `∂_axis f` at `point`.
    pub(crate) fn partial(&self, f: impl Fn(&[f64]) -> Mat, point: &[f64], axis: usize) -> Mat {
        let mut plus = point.to_vec();
        let mut minus = point.to_vec();
        plus[axis] += self.fd_step;
        minus[axis] -= self.fd_step;
        (f(&plus) - f(&minus)) / (2.0 * self.fd_step)
    }
}

/// One residual magnitude (Frobenius norm) at a sample point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualSample {
    pub overlap: Vec<usize>,
    pub point: Vec<f64>,
    pub component: usize,
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquationResidual {
    pub equation: String,
    pub samples: Vec<ResidualSample>,
    pub max: f64,
    pub rms: f64,
}

impl EquationResidual {
    pub fn new(equation: impl Into<String>, samples: Vec<ResidualSample>) -> Self {
        let max = samples.iter().map(|s| s.magnitude).fold(0.0, f64::max);
        let rms = if samples.is_empty() {
            0.0
        } else {
            (samples.iter().map(|s| s.magnitude * s.magnitude).sum::<f64>() / samples.len() as f64).sqrt()
        };
        Self {
            equation: equation.into(),
            samples,
            max,
            rms,
        }
    }

    pub fn summary(&self) -> EquationSummary {
        EquationSummary {
            equation: self.equation.clone(),
            samples: self.samples.len(),
            max: self.max,
            rms: self.rms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquationSummary {
    pub equation: String,
    pub samples: usize,
    pub max: f64,
    pub rms: f64,
}

/// Residuals of a group of equations.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Residual {
    pub equations: Vec<EquationResidual>,
}

impl Residual {
    pub fn max(&self) -> f64 {
        self.equations.iter().map(|e| e.max).fold(0.0, f64::max)
    }

    pub fn equation(&self, name: &str) -> Option<&EquationResidual> {
        self.equations.iter().find(|e| e.equation == name)
    }

    pub fn summary(&self) -> Vec<EquationSummary> {
        self.equations.iter().map(EquationResidual::summary).collect()
    }
}

/// Evaluates `eval` at every sample of every overlap in parallel; each call
/// returns the residual matrices by component. Output order follows the
/// overlaps, then the grid.
pub(crate) fn sample_overlaps<const N: usize>(
    data: &GaugeChartData,
    overlaps: &[[usize; N]],
    eval: impl Fn([usize; N], &[f64]) -> Vec<Mat> + Sync,
) -> Vec<ResidualSample> {
    let jobs: Vec<([usize; N], Vec<f64>)> = overlaps
        .iter()
        .flat_map(|o| data.base.overlap_samples(o).into_iter().map(move |p| (*o, p)))
        .collect();
    jobs.par_iter()
        .flat_map_iter(|(o, p)| {
            eval(*o, p)
                .into_iter()
                .enumerate()
                .map(|(component, m)| ResidualSample {
                    overlap: o.to_vec(),
                    point: p.clone(),
                    component,
                    magnitude: m.norm(),
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

use serde::Serialize;

use crate::error::{Error, Result};

/// One coordinate of the parameter space.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub periodic: bool,
}

impl Axis {
    pub fn interval(name: &str, lower: f64, upper: f64) -> Self {
        Self {
            name: name.to_string(),
            lower,
            upper,
            periodic: false,
        }
    }

    pub fn circle(name: &str) -> Self {
        Self {
            name: name.to_string(),
            lower: 0.0,
            upper: std::f64::consts::TAU,
            periodic: true,
        }
    }

    fn span(&self) -> f64 {
        self.upper - self.lower
    }
}

/// An open box in parameter coordinates. On a periodic axis the bounds may
/// leave the fundamental domain; membership is tested modulo the period.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Chart {
    pub name: String,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// A base manifold covered by charts, sampled on a cell-centred grid.
///
/// All charts share the parameter coordinates, so a sample point of an
/// overlap is identified with itself in every chart.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaseModel {
    pub axes: Vec<Axis>,
    pub charts: Vec<Chart>,
    /// Grid points per axis.
    pub resolution: usize,
}

impl BaseModel {
    pub fn new(axes: Vec<Axis>, charts: Vec<Chart>, resolution: usize) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::BadParameter(format!("bases have 1 or 2 coordinates, got {}", axes.len())));
        }
        if resolution == 0 {
            return Err(Error::BadParameter("grid resolution must be positive".into()));
        }
        for chart in &charts {
            if chart.lower.len() != axes.len() || chart.upper.len() != axes.len() {
                return Err(Error::structural(format!("chart {} has the wrong dimension", chart.name)));
            }
        }
        Ok(Self {
            axes,
            charts,
            resolution,
        })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Number of independent 2-form components.
    pub fn two_form_components(&self) -> usize {
        self.dim() * (self.dim() - 1) / 2
    }

    /// Smallest grid spacing over all axes.
    pub fn spacing(&self) -> f64 {
        self.axes
            .iter()
            .map(|a| a.span() / self.resolution as f64)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn grid(&self) -> Vec<Vec<f64>> {
        let mut points = vec![Vec::new()];
        for axis in &self.axes {
            let step = axis.span() / self.resolution as f64;
            points = points
                .into_iter()
                .flat_map(|p| {
                    (0..self.resolution).map(move |i| {
                        let mut q = p.clone();
                        q.push(axis.lower + (i as f64 + 0.5) * step);
                        q
                    })
                })
                .collect();
        }
        points
    }

    pub fn contains(&self, chart: usize, point: &[f64]) -> bool {
        let chart = &self.charts[chart];
        self.axes.iter().enumerate().all(|(i, axis)| {
            let (lo, hi) = (chart.lower[i], chart.upper[i]);
            if axis.periodic {
                let period = axis.span();
                let shift = ((lo - point[i]) / period).ceil();
                let x = point[i] + shift * period;
                // `x` is the representative in `[lo, lo + period)`.
                x > lo && x < hi
            } else {
                point[i] > lo && point[i] < hi
            }
        })
    }

    /// Grid points lying in every listed chart.
    pub fn overlap_samples(&self, charts: &[usize]) -> Vec<Vec<f64>> {
        self.grid()
            .into_iter()
            .filter(|p| charts.iter().all(|&c| self.contains(c, p)))
            .collect()
    }

    /// Increasing chart tuples of the given length with a sampled overlap.
    pub fn overlaps(&self, len: usize) -> Vec<Vec<usize>> {
        let grid = self.grid();
        let mut out = Vec::new();
        let mut tuple = Vec::with_capacity(len);
        self.collect_overlaps(&grid, len, 0, &mut tuple, &mut out);
        out
    }

    fn collect_overlaps(&self, grid: &[Vec<f64>], len: usize, start: usize, tuple: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if tuple.len() == len {
            if grid.iter().any(|p| tuple.iter().all(|&c| self.contains(c, p))) {
                out.push(tuple.clone());
            }
            return;
        }
        for c in start..self.charts.len() {
            tuple.push(c);
            self.collect_overlaps(grid, len, c + 1, tuple, out);
            tuple.pop();
        }
    }

    /// A central difference needs both stencil points inside the cell of
    /// the sample, so the step may be at most half the grid spacing.
    pub fn check_step(&self, step: f64) -> Result<()> {
        let spacing = self.spacing();
        if !(step > 0.0) || step > spacing / 2.0 {
            return Err(Error::StepTooLarge { step, spacing });
        }
        Ok(())
    }
}

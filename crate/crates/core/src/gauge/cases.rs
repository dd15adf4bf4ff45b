use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::gauge::base::{Axis, BaseModel, Chart};
use crate::gauge::data::{field, form, BField, Connection, Form, GaugeChartData};
use crate::gauge::matrix::{rotation2, so2_generator, so3_hat, Mat, MatrixCrossedModule};

/// Names of the bundled analytic cases.
pub const BUILTIN_CASES: [&str; 7] = [
    "trivial",
    "u1-circle",
    "u1-three-chart",
    "u1-monopole",
    "u1-plane",
    "so3-plane",
    "so3-conjugation",
];

pub type Params = BTreeMap<String, f64>;

fn param(params: &Params, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

fn resolution(params: &Params, default: usize) -> Result<usize> {
    let r = param(params, "resolution", default as f64);
    if r < 1.0 || r.fract() != 0.0 {
        return Err(Error::BadParameter(format!("resolution must be a positive integer, got {r}")));
    }
    Ok(r as usize)
}

fn chart(name: &str, lower: &[f64], upper: &[f64]) -> Chart {
    Chart {
        name: name.to_string(),
        lower: lower.to_vec(),
        upper: upper.to_vec(),
    }
}

fn constant(m: Mat) -> crate::gauge::data::Field {
    field(move |_| m.clone())
}

fn zero_form(size: usize, components: usize) -> Form {
    form(move |_| vec![Mat::zeros(size, size); components])
}

fn j_times(c: f64) -> Mat {
    so2_generator() * c
}

/// Two arcs covering the circle, each of length `1.4π`.
fn circle_charts() -> Vec<Chart> {
    vec![
        chart("west", &[-0.7 * PI], &[0.7 * PI]),
        chart("east", &[0.3 * PI], &[1.7 * PI]),
    ]
}

/// Builds one of the bundled chart cases. `so3-conjugation` has no chart
/// data and is handled by [`crate::gauge::conjugation_t_check`].
pub fn builtin_case(name: &str, params: &Params) -> Result<GaugeChartData> {
    match name {
        "trivial" => trivial(params),
        "u1-circle" => u1_circle(params),
        "u1-three-chart" => u1_three_chart(params),
        "u1-monopole" => u1_monopole(params),
        "u1-plane" => u1_plane(params),
        "so3-plane" => so3_plane(params),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// Identity transitions, zero connection on a two-arc circle.
fn trivial(params: &Params) -> Result<GaugeChartData> {
    let base = BaseModel::new(vec![Axis::circle("theta")], circle_charts(), resolution(params, 64)?)?;
    Ok(GaugeChartData {
        name: "trivial".into(),
        xm: MatrixCrossedModule::u1_identity(),
        base,
        d: BTreeMap::from([([0, 1], constant(Mat::identity(2, 2)))]),
        h: BTreeMap::new(),
        connection: Some(Connection {
            chart: vec![zero_form(2, 1), zero_form(2, 1)],
            pair: BTreeMap::from([([0, 1], zero_form(2, 1))]),
        }),
        bfield: None,
        fd_step: param(params, "fd_step", 1e-3),
        t_step: 1e-4,
    })
}

/// `(U(1) → U(1))` on two arcs with `d = exp(ikθ)`, `a = 0` and `A_west`
/// fixed by the first connection law.
fn u1_circle(params: &Params) -> Result<GaugeChartData> {
    let k = param(params, "k", 1.0);
    let base = BaseModel::new(vec![Axis::circle("theta")], circle_charts(), resolution(params, 64)?)?;
    let east = form(|p| vec![j_times(0.3 + p[0].sin())]);
    let west = form(move |p| vec![j_times(0.3 + p[0].sin() - k)]);
    Ok(GaugeChartData {
        name: "u1-circle".into(),
        xm: MatrixCrossedModule::u1_identity(),
        base,
        d: BTreeMap::from([([0, 1], field(move |p| rotation2(k * p[0])))]),
        h: BTreeMap::new(),
        connection: Some(Connection {
            chart: vec![west, east],
            pair: BTreeMap::from([([0, 1], zero_form(2, 1))]),
        }),
        bfield: None,
        fd_step: param(params, "fd_step", 1e-3),
        t_step: 1e-4,
    })
}

/// `(U(1) → 1)` on three arcs with a common overlap, `h = exp(iφ)` with
/// `φ = amp·sin θ + 0.2`, and `a_01` solving the second connection law.
fn u1_three_chart(params: &Params) -> Result<GaugeChartData> {
    let amp = param(params, "amp", 0.5);
    let charts = (0..3)
        .map(|i| {
            let centre = TAU * i as f64 / 3.0;
            chart(&format!("arc{i}"), &[centre - 0.7 * PI], &[centre + 0.7 * PI])
        })
        .collect();
    let base = BaseModel::new(vec![Axis::circle("theta")], charts, resolution(params, 96)?)?;
    let one = || constant(Mat::identity(1, 1));
    let a_01 = form(move |p| vec![j_times(0.3 * p[0].cos() - amp * p[0].cos() - 0.1)]);
    let a_02 = form(|p| vec![j_times(0.3 * p[0].cos())]);
    let a_12 = form(|_| vec![j_times(0.1)]);
    Ok(GaugeChartData {
        name: "u1-three-chart".into(),
        xm: MatrixCrossedModule::u1_to_point(),
        base,
        d: BTreeMap::from([([0, 1], one()), ([0, 2], one()), ([1, 2], one())]),
        h: BTreeMap::from([([0, 1, 2], field(move |p| rotation2(amp * p[0].sin() + 0.2)))]),
        connection: Some(Connection {
            chart: vec![zero_form(1, 1), zero_form(1, 1), zero_form(1, 1)],
            pair: BTreeMap::from([([0, 1], a_01), ([0, 2], a_02), ([1, 2], a_12)]),
        }),
        bfield: None,
        fd_step: param(params, "fd_step", 1e-3),
        t_step: 1e-4,
    })
}

/// Charge-`n` monopole on the sphere in `(θ, φ)` coordinates, polar caps
/// cut off, with north and south charts overlapping around the equator.
fn u1_monopole(params: &Params) -> Result<GaugeChartData> {
    let n = param(params, "n", 1.0);
    let cut = 0.2;
    let axes = vec![Axis::interval("theta", cut, PI - cut), Axis::circle("phi")];
    let charts = vec![
        chart("north", &[0.0, -1.0], &[FRAC_PI_2 + 0.3, TAU + 1.0]),
        chart("south", &[FRAC_PI_2 - 0.3, -1.0], &[PI, TAU + 1.0]),
    ];
    let base = BaseModel::new(axes, charts, resolution(params, 48)?)?;
    let north = form(move |p| vec![Mat::zeros(2, 2), j_times(-(n / 2.0) * (1.0 - p[0].cos()))]);
    let south = form(move |p| vec![Mat::zeros(2, 2), j_times((n / 2.0) * (1.0 + p[0].cos()))]);
    let b = form(|p| vec![j_times(0.3 * p[0].sin())]);
    Ok(GaugeChartData {
        name: "u1-monopole".into(),
        xm: MatrixCrossedModule::u1_identity(),
        base,
        d: BTreeMap::from([([0, 1], field(move |p| rotation2(n * p[1])))]),
        h: BTreeMap::new(),
        connection: Some(Connection {
            chart: vec![north, south],
            pair: BTreeMap::from([([0, 1], zero_form(2, 2))]),
        }),
        bfield: Some(BField {
            chart: vec![b.clone(), b],
            pair: BTreeMap::from([([0, 1], zero_form(2, 1))]),
        }),
        fd_step: param(params, "fd_step", 1e-2),
        t_step: 1e-4,
    })
}

/// `f_ab` and its gradient, for the coboundary `h_abc = exp(i(f_ab + f_bc − f_ac))`.
fn plane_potential(a: usize, b: usize, p: &[f64]) -> (f64, [f64; 2]) {
    let (u, v) = (0.5 + 0.25 * a as f64, 0.5 + 0.25 * b as f64);
    let phase = b as f64;
    let value = 0.3 * (u * p[0] + phase).sin() * (v * p[1]).cos();
    let dx = 0.3 * u * (u * p[0] + phase).cos() * (v * p[1]).cos();
    let dy = -0.3 * v * (u * p[0] + phase).sin() * (v * p[1]).sin();
    (value, [dx, dy])
}

/// `(U(1) → 1)` on four overlapping boxes of the unit square, so the
/// quadruple cocycle condition is exercised, with a B-field and
/// `δ_ab = B_a − B_b`.
fn u1_plane(params: &Params) -> Result<GaugeChartData> {
    let axes = vec![Axis::interval("x", 0.0, 1.0), Axis::interval("y", 0.0, 1.0)];
    let charts = vec![
        chart("sw", &[-0.1, -0.1], &[0.7, 0.7]),
        chart("se", &[0.3, -0.1], &[1.1, 0.7]),
        chart("nw", &[-0.1, 0.3], &[0.7, 1.1]),
        chart("ne", &[0.3, 0.3], &[1.1, 1.1]),
    ];
    let base = BaseModel::new(axes, charts, resolution(params, 40)?)?;
    let lambda = |a: usize, p: &[f64]| [0.2 * (a + 1) as f64 * p[1], -0.1 * a as f64 * p[0]];
    let g = |a: usize, p: &[f64]| 0.1 * (a + 1) as f64 * p[0] * p[1];
    let mut d = BTreeMap::new();
    let mut pair = BTreeMap::new();
    let mut delta = BTreeMap::new();
    for a in 0..4 {
        for b in a + 1..4 {
            d.insert([a, b], constant(Mat::identity(1, 1)));
            pair.insert(
                [a, b],
                form(move |p| {
                    let (_, grad) = plane_potential(a, b, p);
                    let (la, lb) = (lambda(a, p), lambda(b, p));
                    (0..2).map(|i| j_times(-grad[i] + la[i] - lb[i])).collect()
                }),
            );
            delta.insert([a, b], form(move |p| vec![j_times(g(a, p) - g(b, p))]));
        }
    }
    let mut h = BTreeMap::new();
    for a in 0..4 {
        for b in a + 1..4 {
            for c in b + 1..4 {
                h.insert(
                    [a, b, c],
                    field(move |p| {
                        let f = |i, j| plane_potential(i, j, p).0;
                        rotation2(f(a, b) + f(b, c) - f(a, c))
                    }),
                );
            }
        }
    }
    Ok(GaugeChartData {
        name: "u1-plane".into(),
        xm: MatrixCrossedModule::u1_to_point(),
        base,
        d,
        h,
        connection: Some(Connection {
            chart: (0..4).map(|_| zero_form(1, 2)).collect(),
            pair,
        }),
        bfield: Some(BField {
            chart: (0..4).map(|a| form(move |p| vec![j_times(g(a, p))])).collect(),
            pair: delta,
        }),
        fd_step: param(params, "fd_step", 1e-2),
        t_step: 1e-4,
    })
}

/// `(SO(3) → SO(3))` with conjugation on two boxes of the unit square.
/// `d = exp(f·X₁)` with `f = x + y²/2`; `A_east` and `a` are chosen freely
/// and `A_west`, `δ` are fixed by the first connection and B-field laws.
fn so3_plane(params: &Params) -> Result<GaugeChartData> {
    let axes = vec![Axis::interval("x", 0.0, 1.0), Axis::interval("y", 0.0, 1.0)];
    let charts = vec![chart("west", &[-0.1, -0.1], &[0.6, 1.1]), chart("east", &[0.4, -0.1], &[1.1, 1.1])];
    let base = BaseModel::new(axes, charts, resolution(params, 40)?)?;
    let x1 = so3_hat([1.0, 0.0, 0.0]);
    let d_of = {
        let x1 = x1.clone();
        move |p: &[f64]| (&x1 * (p[0] + 0.5 * p[1] * p[1])).exp()
    };
    let east = |p: &[f64]| vec![so3_hat([p[1], 0.2, p[0]]), so3_hat([0.1, p[0] * p[1], 0.3])];
    let small = |p: &[f64]| vec![so3_hat([0.1 * p[0], 0.0, 0.0]), so3_hat([0.0, 0.2, p[1]])];
    let west = {
        let d_of = d_of.clone();
        move |p: &[f64]| {
            let d = d_of(p);
            let grad = [1.0, p[1]];
            let (e, s) = (east(p), small(p));
            (0..2)
                .map(|i| &d * &e[i] * d.transpose() - &x1 * grad[i] + &s[i])
                .collect::<Vec<_>>()
        }
    };
    let b_east = |p: &[f64]| vec![so3_hat([p[0], p[1], 1.0])];
    let b_west = |p: &[f64]| vec![so3_hat([0.5, p[0] * p[1], 0.0])];
    let delta = {
        let d_of = d_of.clone();
        move |p: &[f64]| {
            let d = d_of(p);
            vec![&b_west(p)[0] - &d * &b_east(p)[0] * d.transpose()]
        }
    };
    Ok(GaugeChartData {
        name: "so3-plane".into(),
        xm: MatrixCrossedModule::so3_conjugation(),
        base,
        d: BTreeMap::from([([0, 1], field(d_of))]),
        h: BTreeMap::new(),
        connection: Some(Connection {
            chart: vec![form(west), form(east)],
            pair: BTreeMap::from([([0, 1], form(small))]),
        }),
        bfield: Some(BField {
            chart: vec![form(b_west), form(b_east)],
            pair: BTreeMap::from([([0, 1], form(delta))]),
        }),
        fd_step: param(params, "fd_step", 1e-2),
        t_step: 1e-4,
    })
}

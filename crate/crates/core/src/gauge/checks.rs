use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauge::data::{sample_overlaps, Connection, EquationResidual, GaugeChartData, Residual, ResidualSample};
use crate::gauge::matrix::{compute_t, inverse, Mat};

pub const COCYCLE_EDGE: &str = "d_ab d_bc = alpha(h_abc) d_ac";
pub const COCYCLE_CELL: &str = "h_abc h_acd = ^{d_ab}h_bcd h_abd";
pub const CONNECTION_FIRST: &str = "A_a = d_ab A_b d_ab^-1 + d_ab d(d_ab^-1) + alpha(a_ab)";
pub const CONNECTION_SECOND: &str =
    "a_ab + ^{d_ab}a_bc = h_abc a_ac h_abc^-1 + h_abc d(h_abc^-1) + T_{A_a}(h_abc^-1)";
pub const BFIELD_PAIR: &str = "B_a = ^{d_ab}B_b + delta_ab";
pub const BFIELD_TRIPLE: &str =
    "delta_ab + ^{d_ab}delta_bc = h_abc delta_ac h_abc^-1 + B_a - h_abc B_a h_abc^-1";
pub const CURVATURE_GLUING: &str = "F_a = d_ab F_b d_ab^-1 + dX + A_a^X + X^A_a - X^X, X = alpha(a_ab)";
pub const NU_GLUING: &str = "nu_a = d_ab nu_b d_ab^-1";

/// Both cocycle conditions at every sample of every triple and quadruple
/// overlap.
pub fn check_gerbe_cocycle_smooth(data: &GaugeChartData) -> Result<Residual> {
    let xm = &data.xm;
    let triples = data.triples();
    for &[a, b, c] in &triples {
        data.d_at([a, b])?;
        data.d_at([b, c])?;
        data.d_at([a, c])?;
        data.h_at([a, b, c])?;
    }
    let quads = data.quadruples();
    for &[a, b, c, e] in &quads {
        for t in [[a, b, c], [a, c, e], [b, c, e], [a, b, e]] {
            data.h_at(t)?;
        }
    }
    let edge = sample_overlaps(data, &triples, |[a, b, c], p| {
        let lhs = data.d[&[a, b]](p) * data.d[&[b, c]](p);
        let rhs = xm.alpha(&data.h[&[a, b, c]](p)) * data.d[&[a, c]](p);
        vec![lhs - rhs]
    });
    let cell = sample_overlaps(data, &quads, |[a, b, c, e], p| {
        let h = |t: [usize; 3]| data.h[&t](p);
        let lhs = h([a, b, c]) * h([a, c, e]);
        let rhs = xm.act(&data.d[&[a, b]](p), &h([b, c, e])) * h([a, b, e]);
        vec![lhs - rhs]
    });
    Ok(Residual {
        equations: vec![EquationResidual::new(COCYCLE_EDGE, edge), EquationResidual::new(COCYCLE_CELL, cell)],
    })
}

/// `g·d(g⁻¹)` by central differences, one matrix per direction.
fn maurer_cartan(data: &GaugeChartData, g: &dyn Fn(&[f64]) -> Mat, p: &[f64]) -> Vec<Mat> {
    let value = g(p);
    (0..data.base.dim())
        .map(|axis| &value * data.partial(|q| inverse(&g(q)), p, axis))
        .collect()
}

/// Both connection laws: the first on pair overlaps, the second on triple
/// overlaps.
pub fn check_connection(data: &GaugeChartData) -> Result<Residual> {
    data.base.check_step(data.fd_step)?;
    let conn = data.connection()?;
    let xm = &data.xm;
    let pairs = data.pairs();
    for &pair in &pairs {
        data.d_at(pair)?;
        conn_pair(conn, pair)?;
    }
    let triples = data.triples();
    for &[a, b, c] in &triples {
        data.h_at([a, b, c])?;
        for pair in [[a, b], [b, c], [a, c]] {
            data.d_at(pair)?;
            conn_pair(conn, pair)?;
        }
    }
    let first = sample_overlaps(data, &pairs, |[a, b], p| {
        let d = data.d[&[a, b]](p);
        let d_inv = inverse(&d);
        let mc = maurer_cartan(data, data.d[&[a, b]].as_ref(), p);
        let (big_a, big_b, small) = (conn.chart[a](p), conn.chart[b](p), conn.pair[&[a, b]](p));
        (0..data.base.dim())
            .map(|i| &big_a[i] - (&d * &big_b[i] * &d_inv + &mc[i] + xm.alpha_lie(&small[i])))
            .collect()
    });
    let second = sample_overlaps(data, &triples, |[a, b, c], p| {
        let h = data.h[&[a, b, c]](p);
        let h_inv = inverse(&h);
        let d_ab = data.d[&[a, b]](p);
        let mc = maurer_cartan(data, data.h[&[a, b, c]].as_ref(), p);
        let (a_ab, a_bc, a_ac) = (conn.pair[&[a, b]](p), conn.pair[&[b, c]](p), conn.pair[&[a, c]](p));
        let big_a = conn.chart[a](p);
        (0..data.base.dim())
            .map(|i| {
                let lhs = &a_ab[i] + xm.act_lie(&d_ab, &a_bc[i]);
                let rhs = &h * &a_ac[i] * &h_inv + &mc[i] + compute_t(&big_a[i], &h_inv, xm, data.t_step);
                lhs - rhs
            })
            .collect()
    });
    Ok(Residual {
        equations: vec![
            EquationResidual::new(CONNECTION_FIRST, first),
            EquationResidual::new(CONNECTION_SECOND, second),
        ],
    })
}

fn conn_pair(conn: &Connection, pair: [usize; 2]) -> Result<()> {
    conn.pair
        .get(&pair)
        .map(|_| ())
        .ok_or_else(|| Error::MissingData(format!("a on overlap {pair:?}")))
}

/// Both B-field laws.
pub fn check_bfield(data: &GaugeChartData) -> Result<Residual> {
    let bf = data.bfield()?;
    let xm = &data.xm;
    let pairs = data.pairs();
    let triples = data.triples();
    let need_delta = |pair: [usize; 2]| {
        bf.pair
            .get(&pair)
            .map(|_| ())
            .ok_or_else(|| Error::MissingData(format!("delta on overlap {pair:?}")))
    };
    for &pair in &pairs {
        data.d_at(pair)?;
        need_delta(pair)?;
    }
    for &[a, b, c] in &triples {
        data.h_at([a, b, c])?;
    }
    let components = data.base.two_form_components();
    let pair_law = sample_overlaps(data, &pairs, |[a, b], p| {
        let d = data.d[&[a, b]](p);
        let (b_a, b_b, delta) = (bf.chart[a](p), bf.chart[b](p), bf.pair[&[a, b]](p));
        (0..components)
            .map(|k| &b_a[k] - (xm.act_lie(&d, &b_b[k]) + &delta[k]))
            .collect()
    });
    let triple_law = sample_overlaps(data, &triples, |[a, b, c], p| {
        let h = data.h[&[a, b, c]](p);
        let h_inv = inverse(&h);
        let d_ab = data.d[&[a, b]](p);
        let (ab, bc, ac) = (bf.pair[&[a, b]](p), bf.pair[&[b, c]](p), bf.pair[&[a, c]](p));
        let b_a = bf.chart[a](p);
        (0..components)
            .map(|k| {
                let lhs = &ab[k] + xm.act_lie(&d_ab, &bc[k]);
                let rhs = &h * &ac[k] * &h_inv + &b_a[k] - &h * &b_a[k] * &h_inv;
                lhs - rhs
            })
            .collect()
    });
    Ok(Residual {
        equations: vec![
            EquationResidual::new(BFIELD_PAIR, pair_law),
            EquationResidual::new(BFIELD_TRIPLE, triple_law),
        ],
    })
}

/// A 2-form value at a point of a chart.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoFormSample {
    pub chart: usize,
    pub point: Vec<f64>,
    pub components: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub curvature: Vec<TwoFormSample>,
    /// `ν = F + α(B)`; empty without a B-field.
    pub nu: Vec<TwoFormSample>,
    /// Curvature gluing, and `ν` gluing when a B-field is present.
    pub residual: Residual,
    /// `ν` gluing is only expected when H is abelian.
    pub nu_gluing_expected: bool,
}

/// `P ∧ Q` for matrix-valued 1-forms.
fn wedge(dim: usize, p: &[Mat], q: &[Mat]) -> Vec<Mat> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            out.push(&p[i] * &q[j] - &p[j] * &q[i]);
        }
    }
    out
}

/// Exterior derivative of a 1-form by central differences.
fn exterior(data: &GaugeChartData, f: &dyn Fn(&[f64]) -> Vec<Mat>, p: &[f64]) -> Vec<Mat> {
    let dim = data.base.dim();
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            out.push(data.partial(|q| f(q)[j].clone(), p, i) - data.partial(|q| f(q)[i].clone(), p, j));
        }
    }
    out
}

fn curvature_at(data: &GaugeChartData, chart: usize, p: &[f64]) -> Vec<Mat> {
    let conn = data.connection.as_ref().expect("checked by caller");
    let a = conn.chart[chart](p);
    let dim = data.base.dim();
    exterior(data, conn.chart[chart].as_ref(), p)
        .into_iter()
        .zip(wedge(dim, &a, &a))
        .map(|(da, aa)| da + aa)
        .collect()
}

fn nu_at(data: &GaugeChartData, chart: usize, p: &[f64]) -> Vec<Mat> {
    let bf = data.bfield.as_ref().expect("checked by caller");
    let b = bf.chart[chart](p);
    curvature_at(data, chart, p)
        .into_iter()
        .zip(b)
        .map(|(f, b)| f + data.xm.alpha_lie(&b))
        .collect()
}

fn flatten(m: &Mat) -> Vec<f64> {
    m.transpose().iter().copied().collect()
}

/// `F_α = dA_α + A_α ∧ A_α`, `ν_α = F_α + α(B_α)` and their gluing residuals.
pub fn curvature_and_nu(data: &GaugeChartData) -> Result<CurvatureReport> {
    data.base.check_step(data.fd_step)?;
    let conn = data.connection()?;
    let dim = data.base.dim();
    let has_b = data.bfield.is_some();
    let mut curvature = Vec::new();
    let mut nu = Vec::new();
    for chart in 0..data.base.charts.len() {
        for p in data.base.overlap_samples(&[chart]) {
            let sample = |values: Vec<Mat>| TwoFormSample {
                chart,
                point: p.clone(),
                components: values.iter().map(flatten).collect(),
            };
            curvature.push(sample(curvature_at(data, chart, &p)));
            if has_b {
                nu.push(sample(nu_at(data, chart, &p)));
            }
        }
    }
    let pairs = data.pairs();
    for &pair in &pairs {
        data.d_at(pair)?;
        conn_pair(conn, pair)?;
    }
    let xm = &data.xm;
    let gluing = sample_overlaps(data, &pairs, |[a, b], p| {
        let g = data.d[&[a, b]](p);
        let g_inv = inverse(&g);
        let alpha_small = |q: &[f64]| -> Vec<Mat> { conn.pair[&[a, b]](q).iter().map(|m| xm.alpha_lie(m)).collect() };
        let x = alpha_small(p);
        let big_a = conn.chart[a](p);
        let dx = exterior(data, &alpha_small, p);
        let a_x = wedge(dim, &big_a, &x);
        let x_a = wedge(dim, &x, &big_a);
        let x_x = wedge(dim, &x, &x);
        let (f_a, f_b) = (curvature_at(data, a, p), curvature_at(data, b, p));
        (0..f_a.len())
            .map(|k| &f_a[k] - (&g * &f_b[k] * &g_inv + &dx[k] + &a_x[k] + &x_a[k] - &x_x[k]))
            .collect()
    });
    let mut equations = vec![EquationResidual::new(CURVATURE_GLUING, gluing)];
    if has_b {
        let nu_gluing: Vec<ResidualSample> = sample_overlaps(data, &pairs, |[a, b], p| {
            let g = data.d[&[a, b]](p);
            let g_inv = inverse(&g);
            let (nu_a, nu_b) = (nu_at(data, a, p), nu_at(data, b, p));
            nu_a.iter().zip(&nu_b).map(|(x, y)| x - &g * y * &g_inv).collect()
        });
        equations.push(EquationResidual::new(NU_GLUING, nu_gluing));
    }
    Ok(CurvatureReport {
        curvature,
        nu,
        residual: Residual { equations },
        nu_gluing_expected: xm.is_h_abelian(),
    })
}

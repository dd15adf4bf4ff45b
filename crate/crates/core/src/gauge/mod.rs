//! Numerical checks of the gluing laws of connections and B-fields on
//! crossed-module gerbes with matrix Lie groups.
//!
//! Fields are closed-form functions of parameter coordinates, evaluated on
//! the grid points of chart overlaps; derivatives are central differences.

mod base;
mod cases;
mod checks;
mod data;
mod matrix;
mod verify;

pub use base::{Axis, BaseModel, Chart};
pub use cases::{builtin_case, Params, BUILTIN_CASES};
pub use checks::{
    check_bfield, check_connection, check_gerbe_cocycle_smooth, curvature_and_nu, CurvatureReport, TwoFormSample,
    BFIELD_PAIR, BFIELD_TRIPLE, COCYCLE_CELL, COCYCLE_EDGE, CONNECTION_FIRST, CONNECTION_SECOND, CURVATURE_GLUING,
    NU_GLUING,
};
pub use data::{
    field, form, BField, Connection, EquationResidual, EquationSummary, Field, Form, GaugeChartData, Residual,
    ResidualSample,
};
pub use matrix::{compute_t, rotation2, so2_generator, so3_hat, Mat, MatrixCrossedModule};
pub use verify::{
    all_residuals, check_simplicial_connection, conjugation_t_check, default_tolerance, run_case, verify,
    EquationCheck, GaugeJson, GaugeReport, SimplicialConnection, TCheck, CONVERGENCE_FLOOR, MIN_HALVING_RATIO,
};

//! Three operations exposed to the browser. Each takes plain strings and
//! returns a JSON report.

use std::sync::Arc;

use gerbe_core::fingroup::{preset_library, validate_crossed_module};
use gerbe_core::gauge::{run_case, GaugeJson};
use gerbe_core::gerbe::{classify_gerbes, CechLayout, ClassifyOptions};
use gerbe_core::simplicial::CoverComplex;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn js(err: impl std::fmt::Display) -> JsError {
    JsError::new(&err.to_string())
}

/// Checks the crossed-module axioms of a preset such as `xmod_mod(4,2)`.
#[wasm_bindgen(js_name = checkXmod)]
pub fn check_xmod(expr: &str) -> Result<String, JsError> {
    let xm = preset_library(expr).and_then(|p| p.into_xmod()).map_err(js)?;
    let action: Vec<usize> = xm.action().rows().flatten().copied().collect();
    let report = validate_crossed_module(xm.h(), xm.d(), xm.alpha_map(), &action).map_err(js)?;
    Ok(json!({
        "name": xm.name(),
        "h_order": xm.h().order(),
        "d_order": xm.d().order(),
        "kernel_order": xm.kernel().group.order(),
        "cokernel_order": xm.cokernel().group.order(),
        "valid": report.is_valid(),
        "violations": report.violations,
    })
    .to_string())
}

/// Counts stable equivalence classes of gerbe cocycles on a preset cover.
#[wasm_bindgen(js_name = classifyGerbes)]
pub fn classify_gerbes_on(cover: &str, xmod: &str) -> Result<String, JsError> {
    let cover = CoverComplex::preset(cover).map_err(js)?;
    let xm = Arc::new(preset_library(xmod).and_then(|p| p.into_xmod()).map_err(js)?);
    let layout = Arc::new(CechLayout::new(cover));
    let result = classify_gerbes(&layout, &xm, &ClassifyOptions::default()).map_err(js)?;
    serde_json::to_string(&result.report()).map_err(js)
}

/// Runs a bundled gauge case, optionally with a custom finite-difference
/// step (pass 0 for the default).
#[wasm_bindgen(js_name = verifyGauge)]
pub fn verify_gauge(case: &str, fd_step: f64) -> Result<String, JsError> {
    let mut case_file = GaugeJson::named(case);
    if fd_step > 0.0 {
        case_file.fd_step = Some(fd_step);
    }
    let report = run_case(&case_file).map_err(js)?;
    serde_json::to_string(&report).map_err(js)
}

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use gerbe_core::fingroup::presets::{GROUP_PRESETS, XMOD_PRESETS};
use gerbe_core::fingroup::{preset_library, validate_crossed_module, FiniteGroup, GroupJson, Preset};
use gerbe_core::gauge::{run_case, GaugeJson, BUILTIN_CASES};
use gerbe_core::gerbe::{
    abelian_oracle, classify_gerbes, classify_via_maps, enumerate_cocycles, lift_gerbe, CechLayout, ClassifyOptions,
    CocycleJson, CoverMapContext, CoverNerve, GerbeCocycle,
};
use gerbe_core::parallel::SearchOptions;
use gerbe_core::simplicial::{CoverComplex, SimplicialGroup};
use gerbe_core::twist::classify_bundles;
use gerbe_core::xnerve::{check_prop55, Prop55Outcome};
use gerbe_core::{Error, ValidationReport};
use serde_json::{json, Value};

use crate::inputs::{self, BASE_PRESETS, COVER_PRESETS};
use crate::report::{Cache, Outcome, RunReport};

pub struct Settings {
    pub truncation: usize,
    pub budget: u64,
    pub search: SearchOptions,
    pub force: bool,
    pub fd_step: Option<f64>,
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
}

fn row(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}

fn agreement(agrees: bool) -> &'static str {
    if agrees {
        "agree"
    } else {
        "DISAGREE"
    }
}

/// Axiom names in the order they are checked.
const XMOD_AXIOMS: &[&str] = &[
    "H group axioms",
    "D group axioms",
    "alpha homomorphism",
    "action by automorphisms",
    "unital action",
    "action compatibility",
    "Peiffer",
    "equivariance",
];

fn checked_group(label: &str, json: &GroupJson, report: &mut ValidationReport) -> Result<Option<FiniteGroup>> {
    match FiniteGroup::from_json(json) {
        Ok(g) => Ok(Some(g)),
        Err(Error::InvalidGroup(bad)) => {
            for v in bad.violations {
                report.push(format!("{label} {}", v.rule), v.detail);
            }
            Ok(None)
        }
        Err(e) => Err(e).with_context(|| format!("group {label}")),
    }
}

pub fn xmod_check(input: &str) -> Result<Outcome> {
    let tables = inputs::xmod_tables(input)?;
    let mut report = ValidationReport::new();
    let h = checked_group("H", &tables.h, &mut report)?;
    let d = checked_group("D", &tables.d, &mut report)?;
    if let (Some(h), Some(d)) = (&h, &d) {
        if tables.action.len() != d.order() || tables.action.iter().any(|r| r.len() != h.order()) {
            return Err(Error::Structural(format!("action must be a {}×{} table", d.order(), h.order())).into());
        }
        report.extend(validate_crossed_module(h, d, &tables.alpha, &tables.action.concat())?);
    }
    let valid = report.is_valid();
    let name = tables.name.clone().unwrap_or_else(|| format!("({} -> {})", tables.h.name, tables.d.name));
    let verdict = if valid {
        "valid".to_string()
    } else {
        format!("violates {}", report.rules().join(", "))
    };
    Ok(Outcome {
        rows: vec![
            row("crossed module", &name),
            row("orders", format!("|H| = {}, |D| = {}", tables.h.order, tables.d.order)),
            row("axioms", verdict),
        ],
        report: RunReport {
            command: "xmod check".into(),
            inputs: json!({ "xmod": input }),
            results: json!({
                "name": name,
                "h_order": tables.h.order,
                "d_order": tables.d.order,
                "axioms_checked": XMOD_AXIOMS,
                "valid": valid,
                "violations": report.violations,
            }),
            oracle: Value::Null,
            passed: valid,
            exhaustive: true,
        },
    })
}

pub fn gerbe_classify(s: &Settings, cover_arg: &str, xmod_arg: &str, skip_maps: bool, cache: Option<&Cache>) -> Result<Outcome> {
    let cover = inputs::cover(cover_arg)?;
    let xm = Arc::new(inputs::xmod(xmod_arg)?);
    let inputs = json!({
        "cover": cover_arg,
        "xmod": xmod_arg,
        "truncation": s.truncation,
        "skip_maps": skip_maps,
    });
    let key = Cache::key(&json!({
        "command": "gerbe classify",
        "cover": cover.to_json(),
        "xmod": xm.to_json(),
        "truncation": s.truncation,
        "skip_maps": skip_maps,
    }));
    if let Some((mut report, rows)) = cache.filter(|_| !s.force).and_then(|c| c.get(&key)) {
        report.inputs = inputs;
        return Ok(Outcome { report, rows });
    }

    let layout = Arc::new(CechLayout::new(cover.clone()));
    let classification = classify_gerbes(
        &layout,
        &xm,
        &ClassifyOptions {
            search: s.search.clone(),
            force: s.force,
        },
    )?;
    let summary = classification.report();
    let classes = summary.class_count;
    let mut rows = vec![
        row("cover", cover.name()),
        row("crossed module", xm.name()),
        row("cocycles", summary.cocycle_count),
        row("stable classes", classes),
    ];
    let mut passed = true;

    let cohomology = if xm.d().is_trivial() && xm.h().is_abelian() {
        let oracle = abelian_oracle(&cover, xm.h(), 2)?;
        let agrees = oracle.agrees() && oracle.group.order == classes as u128;
        passed &= agrees;
        rows.push(row("H² oracle", format!("order {} ({})", oracle.group.order, agreement(agrees))));
        json!({
            "method": "Smith normal form, degree 2",
            "invariants": oracle.group.invariants,
            "order": oracle.group.order,
            "direct_order": oracle.direct_order,
            "agrees": agrees,
        })
    } else if xm.h().is_trivial() {
        let (nerve, _) = cover.nerve(s.truncation)?;
        let bundles = classify_bundles(&nerve, &SimplicialGroup::constant(xm.d(), s.truncation), &s.search)?;
        let agrees = bundles.matched && bundles.twisting_classes == classes;
        passed &= agrees;
        rows.push(row("bundle oracle", format!("{} classes ({})", bundles.twisting_classes, agreement(agrees))));
        json!({
            "method": "principal bundles over the cover nerve",
            "twisting_classes": bundles.twisting_classes,
            "homotopy_classes": bundles.homotopy_classes,
            "agrees": agrees,
        })
    } else {
        Value::Null
    };

    let maps = if skip_maps {
        Value::Null
    } else {
        let ctx = CoverMapContext::new(layout, xm.clone(), CoverNerve::Ordered, s.truncation, s.budget)?;
        let comparison = classify_via_maps(&classification, &ctx, &s.search)?;
        passed &= comparison.matched;
        rows.push(row(
            "map classes",
            format!("{} ({})", comparison.homotopy_classes, agreement(comparison.matched)),
        ));
        serde_json::to_value(&comparison)?
    };

    let outcome = Outcome {
        report: RunReport {
            command: "gerbe classify".into(),
            inputs,
            exhaustive: summary.exhaustive,
            results: serde_json::to_value(&summary)?,
            oracle: json!({ "cohomology": cohomology, "maps": maps }),
            passed,
        },
        rows,
    };
    if let Some(cache) = cache {
        cache.put(&key, &outcome)?;
    }
    Ok(outcome)
}

pub fn prop55(s: &Settings, xmod_arg: &str) -> Result<Outcome> {
    if !(1..=4).contains(&s.truncation) {
        return Err(Error::Unsupported(format!(
            "comparison through dimension {} (supported: 1 to 4)",
            s.truncation
        ))
        .into());
    }
    let xm = inputs::xmod(xmod_arg)?;
    let inputs = json!({ "xmod": xmod_arg, "truncation": s.truncation });
    let (results, rows, passed) = match check_prop55(&xm, s.truncation, s.budget)? {
        Prop55Outcome::Found(iso) => {
            let dictionary = iso.dictionary();
            let file = match &s.out {
                Some(dir) => {
                    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                    let path = dir.join("prop55-dictionary.json");
                    fs::write(&path, serde_json::to_string_pretty(&dictionary)?)
                        .with_context(|| format!("writing {}", path.display()))?;
                    Some("prop55-dictionary.json")
                }
                None => None,
            };
            let rows = vec![
                row("crossed module", xm.name()),
                row("level sizes", format!("{:?}", dictionary.sizes)),
                row("isomorphism", "found"),
            ];
            let results = json!({ "found": true, "sizes": dictionary.sizes, "dictionary": file });
            (results, rows, true)
        }
        Prop55Outcome::Failed(certificate) => {
            let rows = vec![
                row("crossed module", xm.name()),
                row("isomorphism", format!("none at level {}: {}", certificate.level, certificate.reason)),
            ];
            (json!({ "found": false, "certificate": certificate }), rows, false)
        }
    };
    Ok(Outcome {
        report: RunReport {
            command: "prop55".into(),
            inputs,
            results,
            oracle: Value::Null,
            passed,
            exhaustive: true,
        },
        rows,
    })
}

/// Homotopy classes of maps from a preset base into `W̄G` for constant `G`:
/// conjugacy classes on the circle, one class on contractible bases and
/// higher spheres.
fn expected_bundle_classes(base: &str, group: &FiniteGroup) -> Option<usize> {
    let base: String = base.chars().filter(|c| !c.is_whitespace()).collect();
    match base.as_str() {
        "circle" | "sphere(1)" => Some(group.conjugacy_classes().len()),
        "point" => Some(1),
        b if b.starts_with("sphere(") || b.starts_with("simplex(") => Some(1),
        _ => None,
    }
}

pub fn bundles_classify(s: &Settings, base_arg: &str, group_arg: &str) -> Result<Outcome> {
    if !(2..=4).contains(&s.truncation) {
        return Err(Error::BadParameter(format!("truncation {} is outside 2..=4", s.truncation)).into());
    }
    let base = inputs::base(base_arg, s.truncation)?;
    let group = inputs::group(group_arg)?;
    let result = classify_bundles(&base, &SimplicialGroup::constant(&group, s.truncation), &s.search)?;
    let mut rows = vec![
        row("base", base.name()),
        row("group", group.name()),
        row("twisting classes", result.twisting_classes),
        row("homotopy classes", result.homotopy_classes),
        row("matched", result.matched),
    ];
    let mut passed = result.matched;
    let oracle = match expected_bundle_classes(base_arg, &group) {
        Some(expected) => {
            let agrees = expected == result.twisting_classes && expected == result.homotopy_classes;
            passed &= agrees;
            rows.push(row("expected", format!("{expected} ({})", agreement(agrees))));
            json!({ "expected_classes": expected, "agrees": agrees })
        }
        None => Value::Null,
    };
    Ok(Outcome {
        report: RunReport {
            command: "bundles classify".into(),
            inputs: json!({ "base": base_arg, "group": group_arg, "truncation": s.truncation }),
            results: serde_json::to_value(&result)?,
            oracle,
            passed,
            exhaustive: true,
        },
        rows,
    })
}

pub fn gauge_verify(s: &Settings, case: Option<&str>, file: Option<&Path>) -> Result<Outcome> {
    let mut case_file = match (case, file) {
        (_, Some(path)) => inputs::read_json::<GaugeJson>(path)?,
        (Some(name), None) => GaugeJson::named(name),
        (None, None) => return Err(Error::BadParameter("either --case or --file is required".into()).into()),
    };
    if s.fd_step.is_some() {
        case_file.fd_step = s.fd_step;
    }
    if s.tolerance.is_some() {
        case_file.tolerance = s.tolerance;
    }
    let report = run_case(&case_file)?;
    let mut rows = vec![row("case", &report.case), row("tolerance", format!("{:e}", report.tolerance))];
    for eq in &report.equations {
        let ratio = eq.halving_ratio.map_or("-".to_string(), |r| format!("{r:.2}"));
        let status = match (eq.asserted, eq.passed) {
            (false, _) => "reported",
            (true, true) => "ok",
            (true, false) => "FAIL",
        };
        rows.push(row(
            &format!("{}: {}", eq.check, eq.equation),
            format!("max {:.3e}, halving ratio {ratio}, {status}", eq.max),
        ));
    }
    if let Some(t) = &report.t_check {
        rows.push(row(
            "T finite difference",
            format!("{} samples, max error {:.3e}", t.samples, t.max_error),
        ));
    }
    Ok(Outcome {
        report: RunReport {
            command: "gauge verify".into(),
            inputs: serde_json::to_value(&case_file)?,
            passed: report.passed,
            results: serde_json::to_value(&report)?,
            oracle: Value::Null,
            exhaustive: true,
        },
        rows,
    })
}

fn same_cover(a: &CoverComplex, b: &CoverComplex) -> bool {
    a.clone().with_name("") == b.clone().with_name("")
}

pub fn lift(s: &Settings, cover_arg: &str, xmod_arg: &str, cocycle: Option<&Path>) -> Result<Outcome> {
    let cover = inputs::cover(cover_arg)?;
    let target = Arc::new(inputs::xmod(xmod_arg)?);
    let base = Arc::new(target.derived().image_to_d);
    let cocycles: Vec<GerbeCocycle> = match cocycle {
        Some(path) => {
            let c = inputs::read_json::<CocycleJson>(path)?.to_cocycle()?;
            if !same_cover(c.layout().cover(), &cover) {
                return Err(Error::BadParameter(format!("{} is on a different cover", path.display())).into());
            }
            vec![c]
        }
        None => enumerate_cocycles(&Arc::new(CechLayout::new(cover.clone())), &base, &s.search)?,
    };
    let lifts = s
        .search
        .map(&cocycles, |c| lift_gerbe(c, &target, s.budget))
        .into_iter()
        .collect::<gerbe_core::Result<Vec<_>>>()?;

    let lifted = lifts.iter().filter(|l| l.is_lifted()).count();
    let with_class = lifts.iter().filter(|l| l.obstruction.is_some()).count();
    let disagreements = lifts.iter().filter(|l| l.agrees() == Some(false)).count();
    let entries: Vec<Value> = cocycles
        .iter()
        .zip(&lifts)
        .map(|(c, l)| {
            json!({
                "cocycle": c.values(),
                "lift": l.lift.as_ref().map(|x| x.values().h),
                "obstruction_trivial": l.obstruction.as_ref().map(|o| o.trivial),
            })
        })
        .collect();
    let cohomology = lifts.iter().find_map(|l| l.obstruction.as_ref()).map(|o| &o.cohomology);
    Ok(Outcome {
        rows: vec![
            row("cover", cover.name()),
            row("target", target.name()),
            row("base", base.name()),
            row("cocycles", cocycles.len()),
            row("lifted", lifted),
            row(
                "obstruction classes",
                format!("{with_class} computed, {disagreements} disagreeing with the search"),
            ),
        ],
        report: RunReport {
            command: "lift".into(),
            inputs: json!({
                "cover": cover_arg,
                "xmod": xmod_arg,
                "cocycle": cocycle.map(|p| p.display().to_string()),
            }),
            results: json!({
                "base": base.name(),
                "cocycles": cocycles.len(),
                "lifted": lifted,
                "entries": entries,
            }),
            oracle: json!({
                "method": "obstruction class in degree 3 with kernel coefficients",
                "cohomology": cohomology,
                "classes_computed": with_class,
                "disagreements": disagreements,
            }),
            passed: disagreements == 0,
            exhaustive: true,
        },
    })
}

pub fn preset_list() -> Outcome {
    Outcome {
        rows: vec![
            row("groups", GROUP_PRESETS.join(", ")),
            row("crossed modules", XMOD_PRESETS.join(", ")),
            row("covers", COVER_PRESETS.join(", ")),
            row("bases", BASE_PRESETS.join(", ")),
            row("gauge cases", BUILTIN_CASES.join(", ")),
        ],
        report: RunReport {
            command: "preset list".into(),
            inputs: Value::Null,
            results: json!({
                "groups": GROUP_PRESETS,
                "crossed_modules": XMOD_PRESETS,
                "covers": COVER_PRESETS,
                "bases": BASE_PRESETS,
                "gauge_cases": BUILTIN_CASES,
            }),
            oracle: Value::Null,
            passed: true,
            exhaustive: true,
        },
    }
}

pub fn preset_show(expr: &str) -> Result<Outcome> {
    let (results, rows) = match preset_library(expr) {
        Ok(Preset::Group(g)) => (
            serde_json::to_value(g.to_json())?,
            vec![row("group", g.name()), row("order", g.order()), row("abelian", g.is_abelian())],
        ),
        Ok(Preset::Xmod(x)) => (
            serde_json::to_value(x.to_json())?,
            vec![
                row("crossed module", x.name()),
                row("orders", format!("|H| = {}, |D| = {}", x.h().order(), x.d().order())),
                row("ker α", x.kernel().group.order()),
                row("coker α", x.cokernel().group.order()),
            ],
        ),
        Err(Error::UnknownPreset(_)) => {
            let cover = CoverComplex::preset(expr)?;
            (
                serde_json::to_value(cover.to_json())?,
                vec![
                    row("cover", cover.name()),
                    row("charts", cover.charts()),
                    row("dimension", cover.dimension()),
                ],
            )
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome {
        report: RunReport {
            command: "preset show".into(),
            inputs: json!({ "expr": expr }),
            results,
            oracle: Value::Null,
            passed: true,
            exhaustive: true,
        },
        rows,
    })
}

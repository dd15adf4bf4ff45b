use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gerbe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gerbe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = gerbe(&all);
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report)
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const Z4: &str = r#"{"name": "Z4", "order": 4, "table": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]}"#;
const Z2: &str = r#"{"name": "Z2", "order": 2, "table": [[0,1],[1,0]]}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn valid_preset_passes_the_axiom_check() {
    let (code, report) = json_report(&["xmod", "check", "xmod_mod(4,2)"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["valid"], true);
    assert!(report["results"]["axioms_checked"].as_array().unwrap().len() >= 6);
}

#[test]
fn peiffer_violation_is_named_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // The generator of Z₂ inverts Z₄ although it is α of an element of Z₄.
    let text = format!(r#"{{"H": {Z4}, "D": {Z2}, "alpha": [0,1,0,1], "action": [[0,1,2,3],[0,3,2,1]]}}"#);
    let path = write(dir.path(), "xmod.json", &text);
    let out = gerbe(&["xmod", "check", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Peiffer"));
    let (_, report) = json_report(&["xmod", "check", &path]);
    assert_eq!(report["results"]["valid"], false);
    assert_eq!(report["results"]["violations"][0]["rule"], "Peiffer");
}

#[test]
fn non_group_table_is_reported_as_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        r#"{{"H": {{"name": "bad", "order": 2, "table": [[0,1],[1,1]]}}, "D": {Z2}, "alpha": [0,0], "action": [[0,1],[0,1]]}}"#
    );
    let path = write(dir.path(), "xmod.json", &text);
    let (code, report) = json_report(&["xmod", "check", &path]);
    assert_eq!(code, 1);
    assert!(report["results"]["violations"][0]["rule"].as_str().unwrap().starts_with("H "));
}

#[test]
fn malformed_json_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "broken.json", "{\n  \"H\": {\"name\": \"Z1\",\n  \"order\" 1}\n}");
    let out = gerbe(&["xmod", "check", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn unknown_preset_and_usage_errors_exit_two() {
    assert_eq!(gerbe(&["xmod", "check", "xmod_nothing(3)"]).status.code(), Some(2));
    assert_eq!(gerbe(&["gerbe", "classify", "--cover", "sphere2"]).status.code(), Some(2));
    assert_eq!(gerbe(&["bogus"]).status.code(), Some(2));
}

#[test]
fn two_sphere_gerbes_with_cyclic_two_band() {
    let (code, report) = json_report(&["gerbe", "classify", "--cover", "sphere2", "--xmod", "xmod_abelian(cyclic(2))"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["class_count"], 2);
    assert_eq!(report["oracle"]["cohomology"]["order"], 2);
    assert_eq!(report["oracle"]["cohomology"]["agrees"], true);
    assert_eq!(report["oracle"]["maps"]["matched"], true);
    assert_eq!(report["exhaustive"], true);
    assert!(report.get("timing").is_none());
}

#[test]
fn circle_gerbes_for_a_bare_group_match_bundles() {
    let (code, report) = json_report(&[
        "gerbe",
        "classify",
        "--cover",
        "circle(3)",
        "--xmod",
        "xmod_unit(symmetric(3))",
        "--skip-maps",
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["class_count"], 3);
    assert_eq!(report["oracle"]["cohomology"]["twisting_classes"], 3);
    assert_eq!(report["oracle"]["maps"], Value::Null);
}

#[test]
fn cache_hit_returns_the_identical_report() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let args = [
        "gerbe",
        "classify",
        "--cover",
        "sphere2",
        "--xmod",
        "xmod_abelian(cyclic(2))",
        "--cache-dir",
        cache,
        "--format",
        "json",
    ];
    let first = gerbe(&args);
    assert_eq!(fs::read_dir(cache).unwrap().count(), 1);
    let second = gerbe(&args);
    assert_eq!(first.stdout, second.stdout);
    let mut forced = args.to_vec();
    forced.push("--force");
    assert_eq!(gerbe(&forced).stdout, first.stdout);
}

#[test]
fn oversized_instances_need_force() {
    let out = gerbe(&["gerbe", "classify", "--cover", "sphere3", "--xmod", "xmod_id(symmetric(3))"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_three() {
    let out = gerbe(&["gerbe", "classify", "--cover", "sphere2", "--xmod", "xmod_abelian(cyclic(2))", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("budget"));
    assert_eq!(gerbe(&["bundles", "classify", "--base", "circle", "--group", "cyclic(2)", "--budget", "0"]).status.code(), Some(2));
}

#[test]
fn prop55_writes_the_dictionary() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let (code, report) = json_report(&["prop55", "--xmod", "xmod_id(cyclic(2))", "--out", out_dir]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["found"], true);
    let dictionary: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("prop55-dictionary.json")).unwrap()).unwrap();
    assert_eq!(dictionary["sizes"], serde_json::json!([1, 2, 8, 64]));
    assert_eq!(dictionary["levels"].as_array().unwrap().len(), 4);

    let (code, _) = json_report(&["prop55", "--xmod", "xmod_unit(cyclic(2))"]);
    assert_eq!(code, 0);
}

#[test]
fn prop55_beyond_dimension_four_is_unsupported() {
    let out = gerbe(&["prop55", "--xmod", "xmod_id(cyclic(2))", "--truncation", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unsupported"));
}

#[test]
fn bundles_on_the_circle_count_conjugacy_classes() {
    for (group, expected) in [("symmetric(3)", 3), ("cyclic(4)", 4)] {
        let (code, report) = json_report(&["bundles", "classify", "--base", "circle", "--group", group]);
        assert_eq!(code, 0, "{group}");
        assert_eq!(report["results"]["twisting_classes"], expected);
        assert_eq!(report["results"]["homotopy_classes"], expected);
        assert_eq!(report["results"]["matched"], true);
        assert_eq!(report["oracle"]["agrees"], true);
    }
    let (code, report) = json_report(&["bundles", "classify", "--base", "sphere(2)", "--group", "cyclic(2)"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["twisting_classes"], 1);
}

#[test]
fn bundles_reject_truncation_outside_two_to_four() {
    let out = gerbe(&["bundles", "classify", "--base", "circle", "--group", "cyclic(2)", "--truncation", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bundles_accept_a_group_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "group.json", Z4);
    let (code, report) = json_report(&["bundles", "classify", "--base", "circle", "--group", &path]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["homotopy_classes"], 4);
}

#[test]
fn gauge_bundled_case_passes() {
    let (code, report) = json_report(&["gauge", "verify", "--case", "u1-circle"]);
    assert_eq!(code, 0);
    for eq in report["results"]["equations"].as_array().unwrap() {
        assert!(eq["max"].as_f64().unwrap() < 1e-6, "{eq}");
    }
}

#[test]
fn gauge_step_too_large_exits_two() {
    let out = gerbe(&["gauge", "verify", "--case", "u1-circle", "--fd-step", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("too large"));
}

#[test]
fn gauge_tight_tolerance_is_a_mismatch() {
    let (code, report) = json_report(&["gauge", "verify", "--case", "u1-circle", "--tolerance", "1e-9"]);
    assert_eq!(code, 1);
    assert_eq!(report["passed"], false);
}

#[test]
fn gauge_case_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "gauge.json", r#"{"case": "u1-circle", "params": {"k": 2}, "fd_step": 0.0005}"#);
    let (code, report) = json_report(&["gauge", "verify", "--file", &path]);
    assert_eq!(code, 0);
    assert_eq!(report["inputs"]["params"]["k"], 2.0);
    assert_eq!(report["results"]["fd_step"], 0.0005);
}

#[test]
fn every_cyclic_two_gerbe_on_the_two_sphere_lifts_to_cyclic_four() {
    let (code, report) = json_report(&["lift", "--cover", "sphere2", "--xmod", "xmod_mod(4,2)"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["lifted"], report["results"]["cocycles"]);
    assert_eq!(report["oracle"]["disagreements"], 0);
}

#[test]
fn lift_of_a_single_cocycle_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "cocycle.json",
        r#"{"cover": "sphere2", "xmod": "xmod_id(cyclic(2))", "d": {"0,1": 1, "0,2": 1}, "h": {"0,1,3": 1, "0,2,3": 1}}"#,
    );
    let (code, report) = json_report(&["lift", "--cover", "sphere2", "--xmod", "xmod_mod(4,2)", "--cocycle", &path]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["results"]["cocycles"], 1);
    assert_eq!(report["results"]["lifted"], 1);

    let out = gerbe(&["lift", "--cover", "circle(3)", "--xmod", "xmod_mod(4,2)", "--cocycle", &path]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn presets_list_and_show() {
    let out = gerbe(&["preset", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("xmod_mod(n,m)") && text.contains("u1-circle") && text.contains("sphere2"));

    let (_, report) = json_report(&["preset", "show", "quaternion"]);
    assert_eq!(report["results"]["order"], 8);
    let (_, report) = json_report(&["preset", "show", "xmod_aut(cyclic(3))"]);
    assert_eq!(report["results"]["alpha"], serde_json::json!([0, 0, 0]));
    let (_, report) = json_report(&["preset", "show", "sphere2"]);
    assert_eq!(report["results"]["charts"], 4);
}

#[test]
fn timing_goes_to_stderr_only() {
    let plain = gerbe(&["bundles", "classify", "--base", "circle", "--group", "cyclic(3)", "--format", "json"]);
    let timed = gerbe(&[
        "bundles", "classify", "--base", "circle", "--group", "cyclic(3)", "--format", "json", "--timing",
    ]);
    assert_eq!(plain.stdout, timed.stdout);
    assert!(stderr(&timed).contains("elapsed"));
}

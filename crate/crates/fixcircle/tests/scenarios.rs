use fixcircle::{bundled, load_scenario, parse_scenario, print_scenario, run_scenario, ScenarioError};
use proptest::prelude::*;

fn minimal(map: &str, extra: &str) -> String {
    format!(
        r#"{{
  "name": "t",
  "metric": {{"family": "usual1d"}},
  "map": {map},
  "domain": {{"window": {{"lo": [-2], "hi": [2]}}, "step": 0.5}},
  "checks": [{extra}]
}}"#
    )
}

#[test]
fn every_bundled_scenario_round_trips_and_passes() {
    for name in bundled::names() {
        let scenario = load_scenario(name).unwrap();
        let printed = print_scenario(&scenario);
        assert_eq!(parse_scenario(&printed).unwrap(), scenario, "{name}");
        let run = run_scenario(&scenario, 7).unwrap();
        assert!(run.report.passed, "{name} failed:\n{}", fixcircle::summary::render(&run.report));
    }
}

#[test]
fn unknown_catalog_map_is_rejected() {
    let text = minimal(r#"{"catalog": "T99"}"#, "");
    let err = parse_scenario(&text).and_then(|s| s.resolve(0).map(|_| ())).unwrap_err();
    assert!(matches!(err, ScenarioError::UnknownCatalogMap(ref m) if m == "T99"), "{err}");
}

#[test]
fn low_trace_resolution_is_rejected() {
    let check = r#"{"kind": "trace", "center": 0, "radius": 1, "resolution": 4}"#;
    let err = parse_scenario(&minimal(r#"{"catalog": "T1"}"#, check)).unwrap_err();
    assert!(err.to_string().contains("resolution"), "{err}");
}

#[test]
fn empty_check_list_is_valid_and_passes() {
    let scenario = parse_scenario(&minimal(r#"{"catalog": "T1"}"#, "")).unwrap();
    let run = run_scenario(&scenario, 0).unwrap();
    assert!(run.report.passed);
    assert!(run.report.checks.is_empty());
}

#[test]
fn unknown_fields_and_bad_json_report_positions() {
    let err = parse_scenario(r#"{"name": "t", "metric": {"family": "usual1d"}, "colour": 1}"#).unwrap_err();
    assert!(matches!(err, ScenarioError::Json { .. }), "{err}");
    let err = parse_scenario("{\n  \"name\": ").unwrap_err();
    assert!(matches!(err, ScenarioError::Json { line: 2, .. }), "{err}");
}

#[test]
fn expectation_for_the_wrong_check_is_rejected() {
    let check = r#"{"kind": "thm1", "center": 0, "radius": 2, "expect": {"eqn1": "holds"}}"#;
    assert!(parse_scenario(&minimal(r#"{"catalog": "T1"}"#, check)).is_err());
}

#[test]
fn failed_expectation_is_reported_not_raised() {
    let check = r#"{"kind": "thm1", "center": 0, "radius": 2, "expect": {"thm1_S1": "fails"}}"#;
    let scenario = parse_scenario(&minimal(r#"{"catalog": "T1"}"#, check)).unwrap();
    let run = run_scenario(&scenario, 0).unwrap();
    assert!(!run.report.passed);
    let c = &run.report.checks[0];
    assert!(c.error.is_none());
    assert!(c.expectations.iter().any(|e| !e.passed));
}

#[test]
fn output_paths_must_stay_inside_the_output_directory() {
    let text = minimal(r#"{"catalog": "T1"}"#, "")
        .replace(r#""checks": []"#, r#""checks": [], "outputs": [{"kind": "report", "path": "../escape.json"}]"#);
    assert!(parse_scenario(&text).is_err());
}

#[test]
fn dsl_map_runs_like_the_catalog_entry() {
    let check = r#"{"kind": "fixed_points", "expect_points": [-1, 1]}"#;
    let dsl = r#"{"dsl": "x in {-1, 1} -> x ; otherwise -> 10"}"#;
    for map in [dsl, r#"{"catalog": "T1"}"#] {
        let scenario = parse_scenario(&minimal(map, check)).unwrap();
        assert!(run_scenario(&scenario, 0).unwrap().report.passed);
    }
}

#[test]
fn outputs_are_written_relative_to_the_directory() {
    let scenario = load_scenario("fig5_symskew2d").unwrap();
    let run = run_scenario(&scenario, 7).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let written = run.write_outputs(dir.path()).unwrap();
    assert!(!written.is_empty());
    for path in &written {
        assert!(path.starts_with(dir.path()));
        assert!(std::fs::metadata(path).unwrap().len() > 0);
    }
    let csv = std::fs::read_to_string(dir.path().join("figure5.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("x1,x2,residual"));
    assert!(csv.lines().count() > 500);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_scenarios_round_trip(center in -50i32..50, radius in 1u32..40) {
        let (c, r) = (f64::from(center) / 4.0, f64::from(radius) / 2.0);
        let check = format!(
            r#"{{"kind": "solve", "center": {c}, "radius": {r}, "expect_points": [{}, {}]}}"#,
            c - r / 2.0,
            c + r / 2.0
        );
        let scenario = parse_scenario(&minimal(r#"{"catalog": "T1"}"#, &check)).unwrap();
        prop_assert_eq!(parse_scenario(&print_scenario(&scenario)).unwrap(), scenario.clone());
        prop_assert!(run_scenario(&scenario, 0).unwrap().report.passed);
    }
}

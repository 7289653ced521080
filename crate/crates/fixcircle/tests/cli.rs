use std::process::{Command, Output};

fn fixcircle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fixcircle")).args(args).env_remove("FIXCIRCLE_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_prints_the_two_point_circle() {
    let o = fixcircle(&["solve", "--metric", "usual1d", "--center", "4.5", "--radius", "11"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("{-1, 10}"), "{}", stdout(&o));
}

#[test]
fn verify_bundled_scenario_exits_zero() {
    let o = fixcircle(&["verify", "--scenario", "exm6_t1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("result: PASS"));
}

#[test]
fn failed_expectation_exits_one() {
    let o = fixcircle(&[
        "verify",
        "--metric",
        "usual1d",
        "--map",
        "T1",
        "--check",
        "thm1",
        "--center",
        "0",
        "--radius",
        "2",
        "--expect",
        "thm1_S1=fails",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn fuzz_is_clean_for_exp2d() {
    let o = fixcircle(&["--seed", "7", "fuzz", "--metric", "exp2d", "--trials", "2000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(fixcircle(&["solve", "--bogus"]).status.code(), Some(2));
    assert_eq!(fixcircle(&["verify", "--scenario", "no_such_scenario"]).status.code(), Some(2));
    assert_eq!(fixcircle(&["solve", "--metric", "usual1d", "--center", "0", "--radius", "-1"]).status.code(), Some(2));
}

#[test]
fn json_report_is_stable_for_a_seed() {
    let args = ["--json", "--seed", "3", "verify", "--scenario", "exm1_thm6"];
    let (a, b) = (fixcircle(&args), fixcircle(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["passed"], true);
}

#[test]
fn print_scenario_echoes_parseable_json() {
    let o = fixcircle(&["--print-scenario", "verify", "--scenario", "exm9_t5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let scenario: serde_json::Value = serde_json::Deserializer::from_str(&text).into_iter().next().unwrap().unwrap();
    let reparsed = fixcircle::parse_scenario(&scenario.to_string()).unwrap();
    assert_eq!(reparsed, fixcircle::load_scenario("exm9_t5").unwrap());
}

#[test]
fn trace_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("diamond.csv");
    let o = fixcircle(&[
        "trace",
        "--metric",
        "symskew2d",
        "--center",
        "0,0",
        "--radius",
        "1",
        "--window",
        "-1:1,-1:1",
        "--resolution",
        "64",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("x1,x2,residual\n"));
    assert!(text.lines().count() > 60);
}

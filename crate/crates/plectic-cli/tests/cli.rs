//! End-to-end runs of the `plectic` binary: exit codes and deterministic
//! reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plectic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_scenario(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = scenario(name);
    let mut args = vec![cmd, "--scenario", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn torus_momentmap_passes() {
    let out = run_scenario("check-momentmap", "torus.toml", &[]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn every_bundled_scenario_validates() {
    for name in [
        "torus.toml",
        "translations_r2.toml",
        "aff1_r3.toml",
        "trivial.toml",
        "torus_isotopy.toml",
    ] {
        let out = run_scenario("validate", name, &[]);
        assert_eq!(out.status.code(), Some(0), "{name}: {out:?}");
    }
}

#[test]
fn nonzero_obstruction_exits_one_with_certificate() {
    let out = run_scenario("obstruction", "translations_r2.toml", &[]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("fail"));
    assert!(text.contains("no moment map exists"));
}

#[test]
fn structural_problems_exit_two() {
    let dir = std::env::temp_dir();
    let bad = dir.join("plectic_bad_degree.toml");
    std::fs::write(
        &bad,
        r#"
[metadata]
n = 2

[manifold]
torus_dim = 2
affine_dim = 1

[lie_algebra]
dim = 2

[action]
generators = ["par_theta1", "par_theta2"]

[forms]
omega = "dtheta1^dtheta2"
"#,
    )
    .unwrap();
    let out = run(&["validate", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");

    let syntactic = dir.join("plectic_bad_syntax.toml");
    std::fs::write(
        &syntactic,
        r#"
[metadata]
n = 2

[manifold]
torus_dim = 2
affine_dim = 1

[lie_algebra]
dim = 2

[action]
generators = ["par_theta1", "par_theta2"]

[forms]
omega = "dtheta1 +* dz1"
"#,
    )
    .unwrap();
    let out = run(&["validate", "--scenario", syntactic.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("forms.omega"), "{err}");

    let out = run(&["validate", "--scenario", "/nonexistent/nowhere.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn machine_reports_are_byte_identical() {
    let a = run_scenario("obstruction", "translations_r2.toml", &["--format", "machine"]);
    let b = run_scenario("obstruction", "translations_r2.toml", &["--format", "machine"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
    let json: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(json["command"], "obstruction");
    assert!(json.get("timing_ms").is_none());
}

#[test]
fn report_flag_writes_a_file() {
    let dir = std::env::temp_dir();
    let path = dir.join("plectic_report_test.json");
    let _ = std::fs::remove_file(&path);
    let out = run_scenario(
        "check-momentmap",
        "torus.toml",
        &["--format", "machine", "--report", path.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("\"routes agree\""));
}

#[test]
fn solve_requires_an_ansatz() {
    let out = run_scenario("solve", "torus.toml", &[]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_scenario("solve", "torus.toml", &["--ansatz", "poly:1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn fixomega_x_flag_overrides() {
    let out = run_scenario("fixomega", "torus.toml", &["--x", "0,1"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    // a non-circle direction is an input error
    let out = run_scenario("fixomega", "torus.toml", &["--x", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn point_flag_overrides() {
    let out = run_scenario(
        "obstruction",
        "torus.toml",
        &["--point", "pi/2,pi,3/2"],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let out = run_scenario("obstruction", "torus.toml", &["--point", "pi/3,0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

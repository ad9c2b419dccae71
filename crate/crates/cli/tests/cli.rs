use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use su11_cli::output::{csv, parse_csv};
use su11_cli::report::evaluate;
use su11_cli::Scenario;
use su11_core::Route;

fn su11(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su11")).args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_scenario(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(format!("{name}.toml"));
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const HYPERBOLIC: &str = r#"
name = "hyp"
class = "hyperbolic"
q = [1.0, 0.0, 0.0]
p = [0.0, 1.0, 0.0]
r0 = [1.4142135623730951, 0.0, 1.0]
lambda = 0.5
alpha = 0.05
k_max = 20
"#;

#[test]
fn list_scenarios_names_bundled_files() {
    let o = su11(&["list-scenarios"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for name in ["fig1", "fig2", "fig3", "hyperbolic"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing from\n{text}");
    }
}

#[test]
fn verify_bundled_fig1_passes_with_bounds() {
    let o = su11(&["verify", "fig1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["status"], "pass");
    assert_eq!(report["class"], "elliptic");
    let a1 = report["bounds"]["A1"].as_f64().unwrap();
    let a2 = report["bounds"]["A2"].as_f64().unwrap();
    assert!((a1 - 1.0226960904984268).abs() < 1e-12 && (a2 - 2.4620698326948345).abs() < 1e-12);
    for key in ["exact_vs_iterated", "stroboscopic", "symmetry", "norm_drift"] {
        assert!(report["residuals"][key].is_number(), "{key}");
    }
}

#[test]
fn verify_hyperbolic_file_passes_without_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "hyp", HYPERBOLIC);
    let o = su11(&["verify", &path]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report.get("bounds").is_none());
    assert!(report["residuals"]["symmetry"].is_null());
}

#[test]
fn unnormalized_vector_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let body = HYPERBOLIC
        .replace("hyperbolic", "elliptic")
        .replace("q = [1.0, 0.0, 0.0]", "q = [0.0, 0.0, 0.9486832980505138]");
    let path = write_scenario(dir.path(), "bad", &body);
    let o = su11(&["verify", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Unnormalized"), "{}", stderr(&o));
}

#[test]
fn hyperbolic_growth_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let body = HYPERBOLIC.replace("k_max = 20", "k_max = 400");
    let path = write_scenario(dir.path(), "big", &body);
    let out = dir.path().join("out");
    let o = su11(&["simulate", &path, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("blow-up"));
}

#[test]
fn failing_check_exits_1_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    // A coarse ODE step cannot meet the stroboscopic tolerance.
    let fig1 = su11_cli::scenario::BUNDLED[0].1;
    let body = format!("{fig1}ode_step = 0.1\n");
    let path = write_scenario(dir.path(), "coarse", &body);
    let o = su11(&["verify", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("check failed: stroboscopic"), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["status"], "fail");
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = su11(&["simulate", "fig2", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for ext in ["csv", "json", "svg"] {
        let x = fs::read(a.join(format!("fig2.{ext}"))).unwrap();
        let y = fs::read(b.join(format!("fig2.{ext}"))).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "fig2.{ext} differs between runs");
    }
    // No temp files left behind.
    assert_eq!(fs::read_dir(&a).unwrap().count(), 3);
}

#[test]
fn csv_round_trips_at_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    let o = su11(&["simulate", "fig2", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("fig2.csv")).unwrap();
    assert!(!text.contains('\r'));

    let rows = parse_csv(&text).unwrap();
    let eval = evaluate(&Scenario::load("fig2").unwrap()).unwrap();
    let expected: Vec<_> =
        eval.trajectories.iter().flat_map(|t| t.samples().iter().map(move |s| (t.route(), s))).collect();
    assert_eq!(rows.len(), expected.len());
    for (row, (route, s)) in rows.iter().zip(&expected) {
        assert_eq!(row.route, *route);
        assert_eq!(row.theta, s.theta);
        assert_eq!(row.r, s.r);
    }
    assert_eq!(csv(&eval.trajectories), text);

    // 36 map steps of 5° close the orbit.
    let map: Vec<_> = rows.iter().filter(|r| r.route == Route::MapIterated).collect();
    assert_eq!(map.len(), 37);
    assert!(map[36].r.distance(&map[0].r) < 1e-9);
}

#[test]
fn outputs_selection_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!("{HYPERBOLIC}outputs = [\"json\"]\nroutes = [\"map\"]\n");
    let path = write_scenario(dir.path(), "only", &body);
    let out = dir.path().join("out");
    let o = su11(&["simulate", &path, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let names: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names, vec![std::ffi::OsString::from("hyp.json")]);
}

#[test]
fn missing_file_exits_1() {
    let o = su11(&["verify", "/nonexistent/scenario.toml"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("I/O error"));
}

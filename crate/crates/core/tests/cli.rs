use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_treelimit"));
    c.env_remove("TREELIMIT_THREADS");
    c
}

fn bundled_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/diag_stretch.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, body).unwrap();
    p
}

fn stretch_config(schedule: &str) -> String {
    format!(r#"{{"family": {{"name": "diagonal_stretch"}}, "graph": {{"kind": "rose"}}, "schedule": {schedule}}}"#)
}

#[test]
fn bundled_config_writes_eight_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["run", bundled_config().to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,energy,delta,diameter,len_a,len_b,len_aa,len_ab,len_aB,len_bb");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    for row in rows {
        let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 10);
    }
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("t=")).count(), 8);
    let tree = std::fs::read_to_string(dir.path().join("tree.json")).unwrap();
    let doc = treelimit::rtree::TreeDocument::from_json(&tree).unwrap();
    assert!(doc.to_tree().is_ok());
    assert_eq!(doc.actions.len(), 2);
}

#[test]
fn csv_floats_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["run", bundled_config().to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    for field in csv.lines().skip(1).flat_map(|l| l.split(',')) {
        let x: f64 = field.parse().unwrap();
        assert_eq!(format!("{x:.16e}"), field);
    }
}

#[test]
fn empty_schedule_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &stretch_config("[]"));
    let out = run(&["run", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schedule"));
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"family": {"name": "diagonal_stretch"}, "graph": {"kind": "rose"}}"#, "schedule"),
        (r#"{"family": {"name": "diagonal_stretch"}, "graph": {"kind": "rose"}, "schedule": [1], "bogus": 1}"#, "bogus"),
        (r#"{"family": {"name": "diagonal_stretch"}, "graph": {"kind": "rose"}, "schedule": [2, 1]}"#, "schedule"),
        (
            r#"{"family": {"name": "diagonal_stretch"}, "graph": {"kind": "rose"}, "schedule": [1], "solver": {"tol": 0}}"#,
            "solver.tol",
        ),
        (r#"{"family": {"name": "octagon_twist"}, "graph": {"kind": "rose"}, "schedule": [100]}"#, "schedule"),
        (r#"{"family": {"name": "constant", "images": []}, "graph": {"kind": "rose"}, "schedule": [1]}"#, "presentation"),
    ];
    for (body, field) in cases {
        let cfg = write_config(dir.path(), body);
        let out = run(&["run", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(3), "{body}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(&format!("`{field}`")), "{body}: {err}");
    }
}

#[test]
fn unreachable_threshold_exits_2_with_quadruple() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &stretch_config("[1.0]"));
    let out = run(&["run", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("quadruple ["), "{err}");
    assert!(err.contains("(v0, "), "{err}");
    assert!(!dir.path().join("results.csv").exists());
}

#[test]
fn missing_config_exits_1() {
    let out = run(&["run", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["run", bundled_config().to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--seed", "99"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&d1, &d2] {
        let out = run(&["run", bundled_config().to_str().unwrap(), "--out", d.path().to_str().unwrap(), "--seed", "3"]);
        assert_eq!(out.status.code(), Some(0));
    }
    for f in ["results.csv", "tree.json"] {
        assert_eq!(std::fs::read(d1.path().join(f)).unwrap(), std::fs::read(d2.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn thread_count_does_not_change_outputs() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for (d, threads) in [(&d1, "1"), (&d2, "4")] {
        let out = bin()
            .env("TREELIMIT_THREADS", threads)
            .args(["run", bundled_config().to_str().unwrap(), "--out", d.path().to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    for f in ["results.csv", "tree.json"] {
        assert_eq!(std::fs::read(d1.path().join(f)).unwrap(), std::fs::read(d2.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = bin().env("TREELIMIT_THREADS", "zero").args(["check", "lengths"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn check_tree_ops_passes() {
    let out = run(&["check", "tree-ops"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn check_hyperbolic_is_fast() {
    let start = Instant::now();
    let out = run(&["check", "hyperbolic"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(start.elapsed() < Duration::from_secs(5), "{:?}", start.elapsed());
}

#[test]
fn check_lengths_passes() {
    assert_eq!(run(&["check", "lengths"]).status.code(), Some(0));
}

#[test]
fn unknown_suite_exits_3() {
    assert_eq!(run(&["check", "geometry"]).status.code(), Some(3));
}

#[test]
fn injected_fault_fails_with_seed() {
    let out = run(&["check", "all", "--inject-fault"]);
    assert_ne!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("FAIL") && l.contains("seed ")), "{stdout}");
}

#[test]
fn tree_command_rebuilds_a_star() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.json");
    std::fs::write(&p, r#"{"distances": [[0,2,2,2],[2,0,2,2],[2,2,0,2],[2,2,2,0]]}"#).unwrap();
    let out = run(&["tree", p.to_str().unwrap(), "--tol", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = treelimit::rtree::TreeDocument::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let tree = doc.to_tree().unwrap();
    assert_eq!(doc.samples.len(), 4);
    for i in 0..4 {
        for j in 0..4 {
            let d = tree.vertex_distance(doc.samples[i], doc.samples[j]);
            assert!((d - if i == j { 0.0 } else { 2.0 }).abs() < 1e-12);
        }
    }
}

#[test]
fn tree_command_rejects_a_square() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.json");
    let s = std::f64::consts::SQRT_2;
    std::fs::write(&p, format!("[[0,1,{s},1],[1,0,1,{s}],[{s},1,0,1],[1,{s},1,0]]")).unwrap();
    let out = run(&["tree", p.to_str().unwrap(), "--tol", "0.01"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("quadruple"));
}

#[test]
fn tree_command_rejects_a_non_metric() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.json");
    std::fs::write(&p, "[[0,1,5],[1,0,1],[5,1,0]]").unwrap();
    assert_eq!(run(&["tree", p.to_str().unwrap(), "--tol", "0.1"]).status.code(), Some(3));
}

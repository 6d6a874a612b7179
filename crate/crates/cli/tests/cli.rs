use std::path::Path;
use std::process::{Command, Output};

fn ale(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ale"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn group_and_mckay_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = ale(dir.path(), &["--cache-dir", "c", "group", "--family", "D", "--k", "3"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["order"], 12);
    assert!(dir.path().join("c/D3.json").exists());

    let out = ale(dir.path(), &["mckay", "--family", "E", "--k", "6"]);
    assert!(out.status.success());
    let v = json(&out);
    let mut marks: Vec<u64> = v["marks"].as_array().unwrap().iter().map(|m| m.as_u64().unwrap()).collect();
    marks.sort_unstable();
    assert_eq!(marks, [1, 1, 1, 2, 2, 2, 3]);
    assert_eq!(v["root_count"], 72);
}

#[test]
fn basis_reports_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let out = ale(dir.path(), &["basis", "--family", "A", "--k", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["dim"], 12);
    assert_eq!(v["passed"], true);
}

#[test]
fn zeta_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("zero.json"), r#"{"coeffs":[[0,0],[0,0],[0,0]]}"#).unwrap();
    std::fs::write(dir.path().join("good.json"), r#"{"coeffs":[[-1,1],[0,0],[0,0]]}"#).unwrap();
    let bad = ale(dir.path(), &["zeta-check", "--family", "A", "--k", "1", "--zeta", "zero.json"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["verdict"]["witness"], serde_json::json!([1]));
    let good = ale(dir.path(), &["zeta-check", "--family", "A", "--k", "1", "--zeta", "good.json"]);
    assert!(good.status.success());
}

#[test]
fn solve_then_metric() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("z.json"), r#"{"coeffs":[[-1,1],[0.5,-0.5],[0,0]]}"#).unwrap();
    let out = ale(
        dir.path(),
        &["--seed", "42", "solve", "--family", "A", "--k", "1", "--zeta", "z.json", "--out", "sol.json"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = ale(dir.path(), &["metric", "--solution", "sol.json", "--out", "metric.csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("metric.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 17));
}

#[test]
fn gauge_verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = ale(
        dir.path(),
        &["--seed", "7", "gauge-verify", "--family", "A", "--k", "1", "--n", "1000", "--pairs", "4", "--out", "r.json"],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("r.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let checks = v["report"]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["tolerance"].is_number() && c["pass"] == true));
}

#[test]
fn run_is_deterministic_and_bad_config_fails() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        let out = ale(dir.path(), &["--seed", "3", "run", "--family", "A", "--k", "2", "--out", name]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let body = |name: &str| {
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join(name)).unwrap()).unwrap();
        v["body"].clone()
    };
    let (a, mut b) = (body("a.json"), body("b.json"));
    b["config"]["report"] = a["config"]["report"].clone();
    assert_eq!(a, b);

    std::fs::write(dir.path().join("cfg.json"), r#"{"tolerances":{"membership":-1.0}}"#).unwrap();
    let out = ale(dir.path(), &["--config", "cfg.json", "group", "--family", "A", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = ale(dir.path(), &["group", "--family", "A", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

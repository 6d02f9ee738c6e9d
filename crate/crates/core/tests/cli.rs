use std::process::Command;

fn ermt() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ermt"))
}

#[test]
fn simulate_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "family = \"uniform_ball\"\nn_list = [20, 30]\nratio = 1.5\ntrials = 2\n[kernel]\nname = \"exponential\"\n").unwrap();
    let out = dir.path().join("out");
    let status = ermt()
        .args(["simulate", "--config", cfg.to_str().unwrap(), "--seed", "4", "--threads", "2", "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    for name in ["report.json", "eigenvalues_n20.csv", "eigenvalues_n30.csv", "histogram_n20.tsv", "histogram_n30.tsv"] {
        assert!(out.join(name).exists(), "{name}");
    }
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["seed"], 4);
    assert_eq!(report["runs"][1]["p"], 45);
}

#[test]
fn mp_and_check_print_tables() {
    let out = ermt().args(["mp", "--ratio", "1", "--points", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x\tdensity\tcdf"));
    let middle: Vec<f64> = text.lines().nth(2).unwrap().split('\t').map(|s| s.parse().unwrap()).collect();
    assert!((middle[1] - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-10);

    let out = ermt().args(["check", "tail", "--dim", "50", "--trials", "200", "--thresholds", "0,0.1"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("threshold\tempirical"));
    assert!(text.lines().nth(1).unwrap().split('\t').nth(1).unwrap().parse::<f64>().unwrap() == 1.0);

    let out = ermt().args(["check", "moment", "--family", "sphere", "--dim", "1", "--trials", "100"]).output().unwrap();
    assert!(out.status.success());
    let row = String::from_utf8(out.stdout).unwrap().lines().nth(1).unwrap().to_string();
    assert_eq!(row.split('\t').nth(2).unwrap().parse::<f64>().unwrap(), 1.0);
}

#[test]
fn errors_are_machine_readable() {
    let out = ermt().args(["check", "tail", "--trials", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let rec: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(rec["error"], "invalid_config");

    let out = ermt().args(["analyze", "/nonexistent/data.csv"]).output().unwrap();
    assert!(!out.status.success());
    let rec: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(rec["error"], "io");

    let out = ermt().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let rec: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(rec["error"], "usage");
}

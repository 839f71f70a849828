use std::process::{Command, Output};

use diophlab::dimension::TauResult;
use diophlab::verify::{record_for, CampaignReport, InstanceDistribution, ReplayResult};
use diophlab::IntervalSet;
use serde_json::Value;

fn diophlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diophlab"))
        .args(args)
        .output()
        .expect("run diophlab")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

#[test]
fn count_example() {
    let out = diophlab(&["count", "--a", "2", "--b", "6", "--eta", "0.1", "--xi", "0.1"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["count"], 3);

    let out = diophlab(&["--format", "csv", "count", "--a", "4", "--b", "6", "--eta", "0.1", "--xi", "0.1", "--integer-bound"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,b,c,d,eta,xi,count,bound,ratio"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[7], "2.6");
}

#[test]
fn tau_example_round_trips() {
    let out = diophlab(&["tau", "--family", "thm12", "--a", "2", "--b", "3", "--psi", "exp:1.0986"]);
    assert!(out.status.success());
    let parsed: TauResult = serde_json::from_slice(&out.stdout).unwrap();
    assert!((parsed.tau - 0.5).abs() < 1e-4);
    assert_eq!(parsed.thresholds.len(), 2);

    let out = diophlab(&["tau", "--family", "thm12", "--a", "2", "--b", "3", "--psi-kind", "base", "--psi-param", "1", "--s", "0.9"]);
    let v = json(&out);
    assert_eq!(v["tau"], 0.5);
    assert!(v["conditions"]["hypotheses"].is_array());
}

#[test]
fn set_json_reparses() {
    let out = diophlab(&["set", "--a", "1", "--b", "2", "--eta", "0.1", "--xi", "0.1"]);
    let v = json(&out);
    let set: IntervalSet = serde_json::from_value(v["set"].clone()).unwrap();
    assert_eq!(set.to_pairs(), vec![(0.0, 0.05), (0.95, 1.0)]);
    assert_eq!(v["components"], 2);

    let out = diophlab(&["--format", "csv", "set", "--a", "1", "--b", "1", "--delta", "0.2"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lo,hi"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    let want = [[0.0, 0.2], [0.8, 1.0]];
    assert_eq!(rows.len(), 2);
    for (row, w) in rows.iter().zip(want) {
        assert!((row[0] - w[0]).abs() < 1e-12 && (row[1] - w[1]).abs() < 1e-12);
    }
}

#[test]
fn cover_and_scan_headers() {
    let out = diophlab(&["--format", "csv", "cover", "--a", "2", "--b", "30", "--c", "-0.3", "--eta", "0.05", "--xi", "0.1"]);
    assert!(stdout(&out).starts_with("a,b,c,d,eta,xi,pieces,bound,ratio\n2,30,-0.3,"));

    let out = diophlab(&["--format", "csv", "scan", "--a", "2,4", "--b", "3,5", "--t", "1"]);
    let text = stdout(&out);
    assert!(text.starts_with("a,b,t,tau_plain,tau_thm12,corollary_threshold,boxdim_estimate\n"));
    // (4, 3) is skipped
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("2,5,1,0.5,0.5,0,\n"));
}

#[test]
fn planar_outputs_are_seeded() {
    let args = ["planar", "area", "--a", "1", "--b", "1", "--eta", "0.1", "--xi", "0.1", "--delta", "0.1", "--seed", "9"];
    let first = diophlab(&args);
    let second = diophlab(&args);
    assert_eq!(first.stdout, second.stdout);
    let v = json(&first);
    assert!((v["area"].as_f64().unwrap() - 0.04).abs() < 1e-15);
    let z = (v["mc"]["estimate"].as_f64().unwrap() - v["e2_exact"].as_f64().unwrap()).abs()
        / v["mc"]["stderr"].as_f64().unwrap();
    assert!(z < 4.0);

    let out = diophlab(&["--format", "csv", "planar", "decompose", "--a", "2", "--b", "50", "--delta", "0.1", "--s", "0.5"]);
    let text = stdout(&out);
    assert!(text.starts_with("part,j,eta,xi,boxes,area,premeasure\nA,,0.1,0.1,"));
    // J = {0, 1, 2} for δ = 0.1
    assert_eq!(text.lines().filter(|l| l.starts_with("B,")).count(), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(diophlab(&["count", "--a", "2"]).status.code(), Some(2));
    assert_eq!(diophlab(&["count", "--a", "2", "--b", "6", "--eta", "1.5", "--xi", "0.1"]).status.code(), Some(2));
    assert_eq!(diophlab(&["tau", "--family", "thm12", "--a", "3", "--b", "2", "--psi", "pow:1"]).status.code(), Some(2));
    assert_eq!(diophlab(&["tau", "--family", "nope", "--a", "2", "--b", "3", "--psi", "pow:1"]).status.code(), Some(2));
    assert_eq!(diophlab(&["verify", "--checks", "no-such-check", "--count", "1"]).status.code(), Some(2));
    // a cell cap of one cell cannot hold any nontrivial construction
    let out = Command::new(env!("CARGO_BIN_EXE_diophlab"))
        .args(["set", "--a", "3", "--b", "700", "--delta", "0.01"])
        .env("DIOPHLAB_CELL_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_report_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let out = diophlab(&[
        "verify",
        "--seed",
        "3",
        "--count",
        "5",
        "--checks",
        "count-oracle,erdos-turan",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("verify:"));
    let report: CampaignReport = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert!(report.passed);
    assert_eq!(report.checks.len(), 2);

    let record = record_for(&InstanceDistribution::new(5, 3), "e-membership", 2).unwrap();
    let file = dir.path().join(record.file_name());
    std::fs::write(&file, serde_json::to_string(&record).unwrap()).unwrap();
    let out = diophlab(&["replay", "--verbose", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let result: ReplayResult = serde_json::from_slice(&out.stdout).unwrap();
    assert!(result.passed);
    assert!(result.trace.unwrap()["cells"].is_array());

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(diophlab(&["replay", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"a": 2, "b": 6, "eta": 0.1, "xi": 0.1, "format": "csv"}"#).unwrap();
    let out = diophlab(&["count", "--config", cfg.to_str().unwrap(), "--b", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).starts_with("a,b,c,d,eta,xi,count,bound,ratio\n2,7,"));
}

#[test]
fn psi_table_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("psi.json");
    let values: Vec<f64> = (1..=40).map(|n| 3f64.powi(-n)).collect();
    std::fs::write(&table, serde_json::to_string(&values).unwrap()).unwrap();
    let psi = format!("table:@{}", table.display());
    let out = diophlab(&["tau", "--family", "tau-plain", "--a", "2", "--b", "3", "--psi", &psi]);
    // tables are judged by their tail, which decays like the closed form 3^{-n}
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["method"], "numeric-bisection");
    assert!((v["tau"].as_f64().unwrap() - 0.5).abs() < 1e-2);
}

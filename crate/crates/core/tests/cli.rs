use std::path::{Path, PathBuf};
use std::process::Command as Process;

use fibext::cli::*;
use fibext::Error;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("fibext-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

fn experiment(json: &str) -> Experiment {
    ExperimentConfig::from_json(json).unwrap().validate(None).unwrap()
}

#[test]
fn reference_configs_parse() {
    for name in ["f2", "z", "zi", "zsqrt5"] {
        let c = ExperimentConfig::load(&configs().join(format!("{name}.json"))).unwrap();
        assert_eq!(c.n, 20);
        let ex = c.validate(None).unwrap();
        assert_ne!(ex.a, ex.b);
    }
}

#[test]
fn config_rejections() {
    let eq = r#"{"domain": {"kind": "rational-integers"}, "a": 3, "b": 3, "N": 10}"#;
    assert!(matches!(ExperimentConfig::from_json(eq).unwrap().validate(None), Err(Error::EqualQuotients)));
    let small = r#"{"domain": {"kind": "rational-integers"}, "a": 2, "b": 3, "N": 10}"#;
    assert!(matches!(ExperimentConfig::from_json(small).unwrap().validate(None), Err(Error::RhoTooSmall(_))));
    let unknown = r#"{"domain": {"kind": "rational-integers"}, "a": 3, "b": 4, "N": 10, "colour": 1}"#;
    assert!(ExperimentConfig::from_json(unknown).is_err());
    let no_p = r#"{"domain": {"kind": "poly-over-prime-field"}, "a": [0, 1], "b": [1, 1], "N": 10}"#;
    assert!(ExperimentConfig::from_json(no_p).unwrap().validate(None).is_err());
}

#[test]
fn construct_report_rows() {
    let ex = experiment(r#"{"domain": {"kind": "poly-over-prime-field", "p": 2}, "a": [0, 1], "b": [1, 1], "N": 20}"#);
    let rep = run_construct(&ex).unwrap();
    assert_eq!(rep.summary.fail, 0);
    let csv = records_csv(&rep.records);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 21);
    assert!(csv.ends_with('\n') && !csv.contains('\r'));
    let (mut x, mut y) = (1i64, 2i64);
    for (k, line) in lines[1..].iter().enumerate() {
        // λ_i = F_{i+2} − 2
        (x, y) = (y, x + y);
        let want = y - 2;
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 11);
        assert_eq!(cols[0], (k + 1).to_string());
        assert_eq!(cols[1].parse::<f64>().unwrap(), want as f64, "row {}", k + 1);
        assert_eq!(cols[1], cols[2]);
        assert!(["pass", "unknown"].contains(&cols[10]));
    }

    let ex = experiment(r#"{"domain": {"kind": "gaussian-integers"}, "a": [2, 1], "b": [2, -1], "N": 15}"#);
    let rep = run_construct(&ex).unwrap();
    assert_eq!(rep.records.len(), 15);
    for r in &rep.records[1..] {
        let d = r.det3.as_deref().unwrap();
        assert!(d == "0+2i" || d == "0-2i", "{d}");
    }
    assert!(rep.records[0].det3.is_none());
}

#[test]
fn oracle_guards() {
    let ex = experiment(
        r#"{"domain": {"kind": "z-sqrt-minus5"}, "a": [3, 0], "b": [2, 1], "N": 10,
            "oracle": {"max_log_height": 2.0, "primitive_only": true}}"#,
    );
    assert!(matches!(run_oracle(&ex), Err(Error::UnsupportedDomain { .. })));

    let ex = experiment(r#"{"domain": {"kind": "rational-integers"}, "a": 3, "b": 4, "N": 10, "oracle": {"max_log_height": -1}}"#);
    let rep = run_oracle(&ex).unwrap();
    let o = rep.oracle.as_ref().unwrap();
    assert!(o.ladder.is_empty() && o.scan.is_empty() && o.candidates == 0);
    assert_eq!(rep.summary.exit_code(true), 0);

    let ex = experiment(r#"{"domain": {"kind": "rational-integers"}, "a": 3, "b": 4, "N": 10}"#);
    assert!(matches!(run_oracle(&ex), Err(Error::Config(_))));
}

#[test]
fn f2_oracle_ladder_matches_construction() {
    let ex = experiment(
        r#"{"domain": {"kind": "poly-over-prime-field", "p": 2}, "a": [0, 1], "b": [1, 1], "N": 20,
            "oracle": {"max_log_height": 8}}"#,
    );
    let rep = run_oracle(&ex).unwrap();
    let o = rep.oracle.as_ref().unwrap();
    assert_eq!(o.agreement.len(), 3);
    assert!(o.agreement.iter().all(|a| a.agrees == fibext::extremal::Verdict::Pass));
    assert_eq!(o.dependence_violations, 0);
    assert!(o.floor_log.is_some());
    assert_eq!(rep.summary.fail, 0);
}

#[test]
fn exit_codes() {
    let s = Summary { pass: 3, unknown: 0, fail: 0 };
    assert_eq!(s.exit_code(true), 0);
    let s = Summary { pass: 3, unknown: 1, fail: 0 };
    assert_eq!((s.exit_code(false), s.exit_code(true)), (0, 2));
    let s = Summary { pass: 3, unknown: 1, fail: 1 };
    assert_eq!(s.exit_code(false), 1);
}

#[test]
fn reports_are_reproducible_in_process() {
    let ex = experiment(r#"{"domain": {"kind": "rational-integers"}, "a": 3, "b": 4, "N": 12}"#);
    let a = run_construct(&ex).unwrap();
    let b = run_construct(&ex).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(records_csv(&a.records), records_csv(&b.records));
    let v: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 12);
    assert_eq!(v["config"]["N"], 12);
}

fn fibext(args: &[&str]) -> std::process::Output {
    Process::new(env!("CARGO_BIN_EXE_fibext")).args(args).output().unwrap()
}

#[test]
fn binary_writes_identical_bytes_across_thread_counts() {
    let cfg = configs().join("zi.json");
    let (d1, d2) = (scratch("t1"), scratch("t3"));
    for (dir, threads) in [(&d1, "1"), (&d2, "3")] {
        let out = fibext(&["construct", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap(), "--threads", threads]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for f in ["construct.json", "trace.csv"] {
        assert_eq!(std::fs::read(d1.join(f)).unwrap(), std::fs::read(d2.join(f)).unwrap(), "{f}");
    }
    let _ = std::fs::remove_dir_all(&d1);
    let _ = std::fs::remove_dir_all(&d2);
}

#[test]
fn binary_reports_errors_with_nonzero_exit() {
    let dir = scratch("bad");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"domain": {"kind": "rational-integers"}, "a": 3, "b": 3, "N": 10}"#).unwrap();
    let out = fibext(&["construct", "--config", bad.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    let empty = dir.join("empty.json");
    std::fs::write(
        &empty,
        r#"{"domain": {"kind": "rational-integers"}, "a": 3, "b": 4, "N": 10, "oracle": {"max_log_height": -1}}"#,
    )
    .unwrap();
    let out = fibext(&["oracle", "--config", empty.to_str().unwrap(), "--out", dir.to_str().unwrap(), "--strict"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn convergents_dump() {
    let ex = experiment(r#"{"domain": {"kind": "rational-integers"}, "a": 3, "b": 4, "N": 10, "convergents": 3}"#);
    let rep = run_convergents(&ex).unwrap();
    let rows: Vec<(String, String)> = rep.convergents.iter().map(|c| (c.p.clone(), c.q.clone())).collect();
    assert_eq!(rows, [("1".into(), "3".into()), ("4".into(), "13".into()), ("13".into(), "42".into())]);
}

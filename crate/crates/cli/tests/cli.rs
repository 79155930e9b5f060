use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn quadlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadlab"))
        .args(args)
        .env("FFM_THREADS", "2")
        .output()
        .expect("spawn quadlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = quadlab(&all);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn rh_check_passes_and_prints_deviation() {
    let o = quadlab(&["rh-check", "--q", "3", "--g", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("max deviation"));
    let v = json(&["rh-check", "--q", "5", "--g", "1"]);
    assert_eq!(v["checked"], 100);
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-8);
}

#[test]
fn impossible_tolerance_exits_one() {
    let o = quadlab(&["rh-check", "--q", "3", "--g", "1", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn budget_refusal_exits_two_with_estimate() {
    let o = quadlab(&["moments", "--q", "3", "--g", "9", "--a", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("estimate"), "{}", stderr(&o));
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["symbol", "--q", "4", "--d", "1,1", "--f", "1"][..],
        &["symbol", "--q", "3", "--d", "1,x", "--f", "1,1"],
        &["charsums", "--q", "3", "--g", "1", "--m", "1", "--logq-y", "1"],
        &["lfun", "--q", "3", "--g", "1", "--d", "0,0,1,1"],
        &["circle-moment", "--q", "3", "--g", "1", "--points", "8"],
        &["moments", "--q", "3", "--g", "1"],
    ] {
        let o = quadlab(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn prop31_suite_passes() {
    let o = quadlab(&["verify", "--suite", "prop31", "--q", "3", "--g", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn lfun_csv_matches_direct_summation() {
    let euler = quadlab(&["lfun", "--q", "3", "--g", "1", "--all", "--format", "csv"]);
    let direct = quadlab(&["lfun", "--q", "3", "--g", "1", "--all", "--direct", "--format", "csv"]);
    assert!(euler.status.success());
    let text = stdout(&euler);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "D,c_0,c_1,c_2");
    assert_eq!(lines.len(), 19);
    assert!(lines[1..].iter().all(|l| l.ends_with(",3")));
    assert_eq!(text, stdout(&direct));
}

#[test]
fn single_lfun_and_symbol() {
    let v = json(&["lfun", "--q", "3", "--g", "1", "--d", "1,2,0,1"]);
    let coeffs = &v["lpolys"][0]["coeffs"];
    assert_eq!(coeffs[0], 1);
    assert_eq!(coeffs[2], 3);
    let s = json(&["symbol", "--q", "3", "--d", "q3:1,0,1", "--f", "1,1", "--trace"]);
    assert_eq!(s["schema_version"], 1);
    assert_eq!(s["value"], -1);
    assert!(s["trace"].is_array());
}

#[test]
fn primes_counts() {
    let v = json(&["primes", "--q", "3", "--max-deg", "5"]);
    assert_eq!(v["counts"], serde_json::json!([3, 3, 8, 18, 48]));
    assert_eq!(v["necklace_ok"], true);
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let listed = quadlab(&["primes", "--q", "5", "--max-deg", "2", "--list", "--cache-dir", cache, "--format", "csv"]);
    assert_eq!(stdout(&listed).lines().count(), 1 + 5 + 10);
    assert!(fs::read_dir(dir.path()).unwrap().count() > 0);
}

#[test]
fn moments_report_fields() {
    let v = json(&["moments", "--q", "5", "--g", "1", "--a", "1,1", "--theta", "0,1.5707963267948966"]);
    for key in ["spec", "empirical", "bound_zeta", "bound_min", "ratio_zeta", "ratio_min", "family_size", "zeros_detected"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["family_size"], 100);
    let t = json(&["moments", "--q", "5", "--g", "1", "--a", "1,1", "--t", "0,0.9759906329155857"]);
    let rel = (t["empirical"].as_f64().unwrap() / v["empirical"].as_f64().unwrap() - 1.0).abs();
    assert!(rel < 1e-6);
    let sweep = quadlab(&["moments", "--q", "3", "--g", "1..2", "--a", "1", "--format", "csv"]);
    assert_eq!(stdout(&sweep).lines().count(), 3);
}

#[test]
fn shard_counts_agree() {
    let args = ["moments", "--q", "5", "--g", "2", "--a", "1", "--theta", "0.3"];
    let one = json(&[&args[..], &["--shards", "1"]].concat());
    let four = json(&[&args[..], &["--shards", "4", "--threads", "4"]].concat());
    let (a, b) = (one["empirical"].as_f64().unwrap(), four["empirical"].as_f64().unwrap());
    assert!((a - b).abs() <= 1e-12 * a.abs());
    assert_eq!(one["zeros_detected"], four["zeros_detected"]);
}

#[test]
fn charsums_rows_and_exploration() {
    let o = quadlab(&["charsums", "--q", "3", "--g", "1", "--m", "2", "--logq-y", "0", "--format", "csv"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 19);
    assert!(text.lines().next().unwrap().starts_with("D,prefix_sum"));
    let v = json(&["charsums", "--q", "3", "--g", "1", "--m", "2", "--logq-y", "0"]);
    assert_eq!(v["value"].as_f64().unwrap(), 18.0);
    let e = quadlab(&["charsums", "--q", "3", "--g", "1", "--m", "1", "--logq-y", "1", "--explore", "--contour"]);
    assert!(e.status.success(), "{}", stderr(&e));
    assert!(stderr(&e).contains("warning"));
}

#[test]
fn circle_moment_runs() {
    let v = json(&["circle-moment", "--q", "3", "--g", "1", "--points", "128"]);
    assert!(v["value"].as_f64().unwrap() > 0.0);
    assert_eq!(v["family_size"], 18);
}

#[test]
fn config_file_supplies_flags_and_cli_wins() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"command": "rh-check", "q": 5, "g": 1, "format": "json"}"#).unwrap();
    let o = quadlab(&["--config", cfg.to_str().unwrap(), "--q", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["q"], 3);
    assert_eq!(v["checked"], 18);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = quadlab(&["rh-check", "--q", "3", "--g", "1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "rh-check");
}

#[test]
fn checkpoint_resume_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    let args = ["moments", "--q", "5", "--g", "1", "--a", "1", "--shards", "3", "--checkpoint", ck.to_str().unwrap()];
    let first = json(&args);
    assert!(ck.exists());
    let second = json(&args);
    assert_eq!(first["empirical"], second["empirical"]);
}

#[test]
fn baseline_regression_detected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let p = path.to_str().unwrap();
    let fresh = quadlab(&["verify", "--suite", "mertens", "--q", "3", "--n", "4", "--baselines", p]);
    assert_eq!(fresh.status.code(), Some(0), "missing keys only warn");
    assert!(stdout(&fresh).contains("not frozen"));
    let up = quadlab(&["verify", "--suite", "mertens", "--q", "3", "--n", "4", "--baselines", p, "--update-baselines"]);
    assert!(up.status.success());
    let ok = quadlab(&["verify", "--suite", "mertens", "--q", "3", "--n", "4", "--baselines", p]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let mut b: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let key = "mertens_log/q=3/n=2/residual";
    let v = b["entries"][key].as_f64().unwrap();
    b["entries"][key] = serde_json::json!(v * (1.0 + 1e-6));
    fs::write(&path, serde_json::to_string(&b).unwrap()).unwrap();
    let bad = quadlab(&["verify", "--suite", "mertens", "--q", "3", "--n", "4", "--baselines", p]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains(key));
}

#[test]
fn checked_in_baselines_reproduce() {
    for suite in ["mertens", "charavg", "prop32"] {
        let o = quadlab(&["verify", "--suite", suite, "--q", "3", "--g", "1"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stderr(&o));
        assert!(!stdout(&o).contains("not frozen"), "{suite}: {}", stdout(&o));
    }
}

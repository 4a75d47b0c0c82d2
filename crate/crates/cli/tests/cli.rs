use std::process::{Command, Output};

fn hspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hspec")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn kappa_example_reports_the_golden_value() {
    let out = hspec(&["kappa", "--c1", "1", "--c2", "1", "--s", "1", "--mu", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "kappa");
    let r = &v["results"][0];
    assert!((r["measured"].as_f64().unwrap() - 6.42686).abs() < 5e-4);
    assert_eq!(r["pass"], true);
    assert!(r["margin"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["runtime_ms"], 0);
}

#[test]
fn soliton_example_passes() {
    let out = hspec(&["soliton", "--d", "1", "--tau", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["results"][0]["measured"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn unknown_flag_is_a_usage_error_without_report() {
    let out = hspec(&["kappa", "--bogus", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bogus"));
}

#[test]
fn out_of_domain_parameter_is_a_usage_error() {
    let out = hspec(&["kappa", "--mu", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn csv_and_json_agree_and_out_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("hspec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bounds.csv");
    let out = hspec(&["bounds", "--d-max", "3", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    let v = json(&hspec(&["bounds", "--d-max", "3"]));
    let mut rows = csv::Reader::from_reader(csv.as_bytes());
    let records: Vec<csv::StringRecord> = rows.records().map(|r| r.unwrap()).collect();
    let results = v["results"].as_array().unwrap();
    assert_eq!(records.len(), results.len());
    let raw = String::from_utf8(hspec(&["bounds", "--d-max", "3"]).stdout).unwrap();
    for rec in &records {
        assert!(raw.contains(&rec[4]), "measured string {} missing from JSON", &rec[4]);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn timing_flag_records_runtimes() {
    let v = json(&hspec(&["dawson", "--timing"]));
    assert!(v["results"].as_array().unwrap().len() == 3);
    let v0 = json(&hspec(&["dawson"]));
    assert!(v0["results"].as_array().unwrap().iter().all(|r| r["runtime_ms"] == 0));
}

#[test]
fn unwritable_output_path_reports_the_path() {
    let out = hspec(&["kappa", "--out", "/nonexistent-dir/x.json"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/x.json"));
}

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetamoments")).args(args).env_remove("ZETAMOMENTS_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV report, skipping the comment and header lines.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn eval_two_methods_with_difference() {
    let o = run(&["eval", "--s", "0.5+100i", "--method", "afe,reference", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# zetamoments 0.1.0"));
    assert_eq!(lines[1], "method,quantity,value,abs_diff");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 2);
    let diff: f64 = rows[1][3].parse().unwrap();
    assert!(diff > 0.0 && diff < 5.0 * (100.0 / (2.0 * std::f64::consts::PI)).powf(-0.25));
}

#[test]
fn gk_table() {
    let o = run(&["conj", "--gk", "0..6", "--format", "csv"]);
    assert!(o.status.success());
    let g: Vec<String> = csv_rows(&stdout(&o)).into_iter().map(|r| r[1].clone()).collect();
    assert_eq!(g[..5], ["1", "1", "2", "42", "24024"]);
    assert_eq!(g.len(), 7);
}

#[test]
fn csv_is_deterministic_for_fixed_seed() {
    let args = ["polymean", "--family", "random", "--t", "50,200", "--n", "30", "--seed", "7", "--format", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["polymean", "--family", "random", "--t", "50,200", "--n", "30", "--seed", "8", "--format", "csv"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn json_complex_pairs() {
    let o = run(&["eval", "--s", "2", "--method", "reference", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let z = &v["rows"][0]["value"];
    assert!((z["re"].as_f64().unwrap() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
    assert_eq!(z["im"].as_f64().unwrap(), 0.0);
}

#[test]
fn exit_codes_and_error_records() {
    let o = run(&["eval", "--s", "0.5+10i", "--method", "afe"]);
    assert_eq!(o.status.code(), Some(2));
    let rec: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(rec["error"], "domain");
    assert_eq!(rec["exit_code"], 2);

    let o = run(&["moment", "--t", "1000", "--max-evals", "100"]);
    assert_eq!(o.status.code(), Some(3));
    let rec: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(rec["error"], "budget-exceeded");

    assert_eq!(run(&["moment", "--unknown-key", "1"]).status.code(), Some(2));
    assert_eq!(run(&["asym", "--series", "inv_power(2)", "--x", "100"]).status.code(), Some(2));
    assert_eq!(run(&["perron", "sum", "--series", "zeta", "--x", "10", "--sigma", "1.5"]).status.code(), Some(2));
}

#[test]
fn verify_exit_status_follows_outcomes() {
    let ok = run(&["verify-all", "--profile", "desk", "--only", "10,11,12", "--format", "csv"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(csv_rows(&stdout(&ok)).iter().all(|r| r[3] == "true" || r[4] == "false"));
    let residues = run(&["verify-all", "--only", "8", "--format", "csv"]);
    assert_eq!(residues.status.code(), Some(1));
}

#[test]
fn output_file_and_table_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d3.csv");
    let cache = dir.path().join("cache");
    let args = ["asym", "--series", "dk_pow(3)", "--x", "1000,20000", "--format", "csv", "--output", out.to_str().unwrap()];
    let first = Command::new(env!("CARGO_BIN_EXE_zetamoments")).args(args).env("ZETAMOMENTS_CACHE_DIR", &cache).output().unwrap();
    assert!(first.status.success());
    assert!(cache.join("d3-20000.zmat").exists());
    let a = std::fs::read(&out).unwrap();
    let second = Command::new(env!("CARGO_BIN_EXE_zetamoments")).args(args).env("ZETAMOMENTS_CACHE_DIR", &cache).output().unwrap();
    assert!(second.status.success());
    assert_eq!(a, std::fs::read(&out).unwrap());
    let rows = csv_rows(&String::from_utf8(a).unwrap());
    assert_eq!(rows[0][2], "29425");
}

#[test]
fn factorize_divisor_square() {
    let o = run(&["factorize", "--family", "dk2:2", "--j", "8", "--format", "csv"]);
    let c: Vec<String> = csv_rows(&stdout(&o)).into_iter().skip(1).map(|r| r[2].clone()).collect();
    assert_eq!(c, ["4", "-1", "0", "0", "0", "0", "0"]);
}

use std::process::{Command, Output};

use serde_json::Value;

fn flk(args: &[&str]) -> Output {
    flk_env(args, &[])
}

fn flk_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_flk"));
    cmd.args(args).env_remove("FLK_MAX_TERMS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("flk runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("flk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn list_shows_every_identity() {
    let o = flk(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("HN_2NM1"));
    assert!(text.lines().count() > 30);

    let v = json(&flk(&["list", "--format", "json"]));
    let rows = v.as_array().unwrap();
    assert!(rows.len() >= 30);
    assert!(rows.iter().all(|r| r["citation"].is_string() && r["rhs"].is_string()));

    let o = flk(&["list", "--tag", "double-series", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn verify_single_identity() {
    let o = flk(&["verify", "--id", "HN_2NM1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("pass"));
}

#[test]
fn verify_unknown_identity_is_usage_error() {
    let o = flk(&["verify", "--id", "NOPE"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown identity"));
}

#[test]
fn verify_needs_a_selection() {
    assert_eq!(flk(&["verify"]).status.code(), Some(2));
    assert_eq!(flk(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn unreachable_tolerance_exits_one_with_report() {
    let o = flk(&["verify", "--id", "HN_2NM1", "--tol", "1e-30", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v[0]["status"], "tol-miss");
}

#[test]
fn term_cap_from_environment() {
    let args = ["verify", "--id", "HN_2NM1", "--method", "series", "--format", "json"];
    let o = flk_env(&args, &[("FLK_MAX_TERMS", "8")]);
    assert_eq!(o.status.code(), Some(1));
    assert_ne!(json(&o)[0]["status"], "pass");
    assert_eq!(flk(&args).status.code(), Some(0));
    assert_eq!(flk_env(&args, &[("FLK_MAX_TERMS", "lots")]).status.code(), Some(2));
}

#[test]
fn verify_all_is_deterministic_and_passes() {
    let (a, b, c) = (tmp("a.json"), tmp("b.json"), tmp("a.csv"));
    for path in [&a, &b] {
        let o = flk(&["verify", "--all", "--deterministic", "--json", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let (ja, jb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ja, jb);
    let v: Value = serde_json::from_slice(&ja).unwrap();
    let reports = v.as_array().unwrap();
    assert!(reports.len() >= 30);
    let ids: Vec<&str> = reports.iter().map(|r| r["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);

    let o = flk(&["verify", "--all", "--tag", "polylog", "--csv", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&c).unwrap();
    assert!(csv.starts_with("id,plans,rhs_value,abs_dev,rel_dev,status,terms_used,runtime_ms\n"));
    assert!(csv.contains("DILOG_4F3"));
}

#[test]
fn expand_catalog_and_numeric() {
    let o = flk(&["expand", "--function", "K_sqrt", "--terms", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[2, 2/3, 2/5]"), "{}", stdout(&o));

    let v = json(&flk(&["expand", "--function", "ln_1mx", "--terms", "4", "--format", "json"]));
    assert_eq!(v["source"], "numeric");
    let c = v["coefficients"].as_array().unwrap();
    assert_eq!(c.len(), 4);
    assert!((c[0]["value"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert_eq!(c[1]["rational"], "-3/2");

    let o = flk(&["expand", "--function", "x_pow:0.5", "--terms", "2", "--format", "json"]);
    assert!((json(&o)["coefficients"][0]["value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-14);

    let o = flk(&["expand", "--function", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown function"));
}

#[test]
fn moments_routes() {
    let v = json(&flk(&["moments", "--kind", "K", "--eta", "0", "--format", "json"]));
    assert!((v["value"].as_f64().unwrap() - 2.0).abs() < 1e-13);

    let v = json(&flk(&["moments", "--kind", "K", "--eta", "0.5", "--format", "json"]));
    assert!((v["value"].as_f64().unwrap() - 1.415_965_594_177_219_015).abs() < 1e-13);
    assert_eq!(v["routes"].as_array().unwrap().len(), 2);

    let o = flk(&["moments", "--kind", "J:3", "--eta", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("tripleform-3"));

    assert_eq!(flk(&["moments", "--kind", "Q", "--eta", "1"]).status.code(), Some(2));
    assert_eq!(flk(&["moments", "--kind", "E", "--eta", "-1.5"]).status.code(), Some(1));
}

#[test]
fn eval_pfq() {
    let v = json(&flk(&["eval", "--pfq", "1/2,1/2;1;0.5", "--format", "json"]));
    assert!((v["value"].as_f64().unwrap() - 1.180_340_599_016_096_226).abs() < 1e-14);

    let v = json(&flk(&["eval", "--pfq", "1,1,1;2,2;-1", "--format", "json"]));
    assert!((v["value"].as_f64().unwrap() - 0.822_467_033_424_113_218).abs() < 1e-13);

    assert_eq!(flk(&["eval", "--pfq", "1;2"]).status.code(), Some(2));
    assert_eq!(flk(&["eval", "--pfq", "1,1;1;1"]).status.code(), Some(1));
}

#[test]
fn etransform_weights() {
    let o = flk(&["etransform", "--g", "K_sqrt"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("E_TRANSFORM:K_sqrt"));
    assert_eq!(flk(&["etransform", "--g", "cos"]).status.code(), Some(2));
}

use std::process::{Command, Output};

use serde_json::Value;

fn divbeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divbeta"))
        .args(args)
        .env_remove("DIVBETA_CACHE_DIR")
        .output()
        .expect("run divbeta")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = args.to_vec();
    full.extend(["--format", "json", "--no-timing"]);
    let out = divbeta(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (v, out.status.code().unwrap())
}

fn terms(v: &Value) -> Vec<(u64, u64, i64)> {
    v["basis_terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["delta_exp"].as_u64().unwrap(), t["e4_exp"].as_u64().unwrap(), t["coeff"].as_i64().unwrap()))
        .collect()
}

#[test]
fn enumerate_listings() {
    let (v, code) = json(&["enumerate", "--prime", "5", "--i", "25"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    let js: Vec<u64> = v["j"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(js.len(), 24);
    assert!(!js.contains(&5));
    assert_eq!(json(&["enumerate", "--prime", "5", "--i", "1250"]).0["count"], 720);
    assert_eq!(json(&["enumerate", "--prime", "7", "--i", "3"]).0["j"], serde_json::json!([1]));
    let table = divbeta(&["enumerate", "--prime", "7", "--i", "3"]);
    assert_eq!(String::from_utf8_lossy(&table.stdout), "1\n");
}

#[test]
fn compute_twenty_five_twenty_nine() {
    let args = ["compute", "--prime", "5", "--i", "25", "--j", "29", "--allow-nonfamily", "--method", "search"];
    let (v, code) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(terms(&v), vec![(50, 0, 1), (42, 24, 4), (41, 27, 3)]);
    assert_eq!(v["search"]["coeffs"], serde_json::json!([0, 0, 0, 0, 0, 0, 0, 4, 3]));
    assert_eq!(v["conditions"]["c4_at_2"]["status"], "certified");
    let again = json(&args).0;
    assert_eq!(v, again);
}

#[test]
fn compute_rejects_nonfamily_without_flag() {
    let out = divbeta(&["compute", "--prime", "5", "--i", "25", "--j", "29"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not an order-p"));
}

#[test]
fn compute_last_row_at_1250() {
    let (v, code) = json(&["compute", "--prime", "5", "--i", "1250", "--j", "748"]);
    assert_eq!(code, 0);
    let got: Vec<(u64, u64, i64)> = terms(&v).into_iter().map(|(a, b, c)| (a, b, c.rem_euclid(5))).collect();
    assert_eq!(
        got,
        vec![(2500, 0, 1), (2300, 600, 3), (2275, 675, 1), (2260, 720, 1), (2255, 735, 2), (2252, 744, 1), (2251, 747, 2)]
    );
    assert_eq!(v["case"]["u"], 3);
}

#[test]
fn compute_both_methods_agree() {
    let (v, code) = json(&["compute", "--prime", "5", "--i", "50", "--j", "29", "--method", "both", "--precision", "40"]);
    assert_eq!(code, 0);
    assert_eq!(v["agree_mod_p"], true);
    assert_eq!(v["series_check"], true);
}

#[test]
fn compute_at_eleven() {
    let (v, code) = json(&["compute", "--prime", "11", "--i", "11", "--j", "11"]);
    assert_eq!(code, 0);
    assert_eq!(terms(&v), vec![(110, 0, 1)]);
    assert_eq!(v["conditions"]["c4_at_2"]["status"], "certified");
}

#[test]
fn compute_needs_conjecture_flag_off_list() {
    assert_eq!(divbeta(&["compute", "--prime", "17", "--i", "1", "--j", "1"]).status.code(), Some(2));
    let (v, code) = json(&["compute", "--prime", "17", "--i", "1", "--j", "1", "--conjecture"]);
    assert_eq!(code, 0);
    assert_eq!(terms(&v), vec![(24, 0, 1)]);
}

#[test]
fn eisenstein_level2_tables() {
    let (v, _) = json(&["eisenstein", "--prime", "13", "--level2"]);
    assert_eq!(v["level2"]["form"], "12*mu^3 + 9*mu^2*eps + 4*mu*eps^2 + eps^3");
    let (v, _) = json(&["eisenstein", "--prime", "5", "--level2"]);
    assert_eq!(v["level2"]["form"], "4*mu + eps");
    assert_eq!(v["level1"]["form"], "E4");
}

#[test]
fn eisenstein_677_uses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (v, code) = json(&["eisenstein", "--prime", "677", "--level2", "--cache-dir", d]);
    assert_eq!(code, 0);
    let coeffs: Vec<u64> = v["level2"]["terms"].as_array().unwrap().iter().map(|t| t["coeff"].as_u64().unwrap()).collect();
    assert_eq!(coeffs.len(), 170);
    assert_eq!(&coeffs[..5], &[676, 127, 236, 375, 522]);
    assert_eq!(&coeffs[167..], &[441, 550, 1]);
    assert!(dir.path().join("eisenstein-level2-p677.txt").exists());
    let (again, _) = json(&["eisenstein", "--prime", "677", "--level2", "--cache-dir", d]);
    assert_eq!(v, again);
}

#[test]
fn reproduce_items() {
    let (v, code) = json(&["reproduce", "eq-1.1", "lemma-2.1"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["items"].as_array().unwrap().len(), 2);
    let out = divbeta(&["reproduce", "no-such-item"]);
    assert_eq!(out.status.code(), Some(2));
}

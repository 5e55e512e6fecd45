use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn lpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpp")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = lpp(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn demands_of_the_three_producer_example() {
    let f = fixture("example2.json");
    let v = json(&["demands", f.to_str().unwrap()]);
    let want = [("1", "4/3"), ("2", "4"), ("3", "4/5"), ("12", "22/3"), ("13", "13/3"), ("23", "42/5"), ("123", "31/3")];
    for (key, d) in want {
        assert_eq!(v["demand"][key], d, "d_{key}");
    }
    assert_eq!(v["r"], "10");

    let table = stdout(&lpp(&["demands", f.to_str().unwrap(), "--decimals", "2"]));
    assert!(table.contains("13/3 (~4.33)"), "{table}");
    assert!(table.contains("approximations to 2 decimal places"));
}

#[test]
fn single_coalition_accepts_both_spellings() {
    let f = fixture("example2.json");
    let a = json(&["demands", f.to_str().unwrap(), "--coalition", "1,3"]);
    let b = json(&["demands", f.to_str().unwrap(), "--coalition", "13"]);
    assert_eq!(a, b);
    assert_eq!(a["value_at_demand"]["13"], "13");
}

#[test]
fn classify_reports_the_grand_only_regime() {
    let v = json(&["classify", fixture("example2.json").to_str().unwrap()]);
    assert_eq!(v["regime"], "GrandOnly");
    assert_eq!(v["m_min"][0]["partition"], "{1,2,3}");
    assert_eq!(v["m_min"].as_array().unwrap().len(), 1);
}

#[test]
fn empty_core_is_a_result_not_an_error() {
    let f = fixture("example4.json");
    let out = lpp(&["core", f.to_str().unwrap(), "--model", "optimistic"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("core: Empty"));
    let v = json(&["core", f.to_str().unwrap(), "--model", "optimistic"]);
    assert_eq!(v["verdict"], "Empty");
    assert!(v["witness"].is_null());
}

#[test]
fn owen_point_matches_between_formats() {
    let f = fixture("example1.json");
    let v = json(&["owen", f.to_str().unwrap()]);
    assert_eq!(v["allocation"]["1"], "22");
    assert_eq!(v["allocation"]["2"], "13");
    assert_eq!(v["in_core"], true);
    let table = stdout(&lpp(&["owen", f.to_str().unwrap()]));
    assert!(table.lines().any(|l| l.split_whitespace().eq(["1", "22"])), "{table}");
}

#[test]
fn owen_refuses_when_the_stock_binds() {
    let out = lpp(&["owen", fixture("example2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("31/3"));
}

#[test]
fn scarce_pool_allocation_uses_the_file_resource_game() {
    let v = json(&["owen", fixture("example3_modR.json").to_str().unwrap()]);
    assert_eq!(v["checked_against"], "user-resource");
    assert_eq!(v["in_core"], true);
}

#[test]
fn invalid_instance_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"A":[[1,0],[0,0]],"B":[[1,1]],"p":[1,1],"c":1,"r":1}"#).unwrap();
    let out = lpp(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("violation"));
    let out = lpp(&["demands", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"A\": ").unwrap();
    assert_eq!(lpp(&["validate", path.to_str().unwrap()]).status.code(), Some(2));
    let f = fixture("example1.json");
    assert_eq!(lpp(&["demands", f.to_str().unwrap(), "--coalition", "9"]).status.code(), Some(2));
    assert_eq!(lpp(&["game", f.to_str().unwrap(), "--model", "partition"]).status.code(), Some(2));
}

#[test]
fn partition_cap_refusal_exits_with_three() {
    let out = lpp(&["stability", fixture("example2.json").to_str().unwrap(), "--partition-cap", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("partition cap"));
}

#[test]
fn stability_lists_the_split_structures() {
    let v = json(&["stability", fixture("example2.json").to_str().unwrap()]);
    let stable: Vec<&str> = v["stable"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert_eq!(stable, ["{1,2}{3}", "{1,3}{2}", "{1}{2,3}"]);
    assert_eq!(v["partitions"].as_array().unwrap().len(), 5);
}

#[test]
fn partition_game_views_bracket_each_coalition() {
    let v = json(&["game", fixture("example2.json").to_str().unwrap(), "--model", "partition", "--rule", "proportional"]);
    assert_eq!(v["v_minus"]["123"], v["v_plus"]["123"]);
    assert!(v["v_minus"].as_object().unwrap().len() == 7);
}

#[test]
fn generation_is_reproducible() {
    let args = ["generate", "--n", "3", "--q", "2", "--g", "2", "--seed", "11", "--regime", "general"];
    let a = lpp(&args);
    let b = lpp(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.json");
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    assert!(lpp(&with_file).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);

    let v = json(&["classify", path.to_str().unwrap()]);
    assert_eq!(v["regime"], "General");
}

#[test]
fn unknown_regime_is_rejected() {
    let out = lpp(&["generate", "--n", "3", "--q", "1", "--g", "1", "--seed", "0", "--regime", "tight"]);
    assert_eq!(out.status.code(), Some(2));
}

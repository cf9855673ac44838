use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use spim::eunitary::{replay, EUnitaryCertificate};
use spim::presentation::Presentation;

fn pres(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presentations").join(name)
}

fn spim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spim")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = spim(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn pmp_answers_and_echoes_the_query() {
    let aab = pres("aab.pres");
    let v = json(&["pmp", aab.to_str().unwrap(), "--word", "a a b"]);
    assert_eq!(v["answer"], "true");
    assert_eq!(v["engine"], "uml");
    assert_eq!(v["query"]["word"], "a a b");
    assert!(v["elapsed_ms"].as_f64().is_some());
    assert_eq!(json(&["pmp", aab.to_str().unwrap(), "--word", "b"])["answer"], "false");
    let aba = pres("aba.pres");
    assert_eq!(json(&["pmp", aba.to_str().unwrap(), "--word", "a'"])["answer"], "true");
}

#[test]
fn analyze_reports_classes_and_round_trips() {
    let v = json(&["analyze", pres("uml.pres").to_str().unwrap()]);
    assert_eq!(v["trace"]["uniquely_marked"], "true");
    assert_eq!(v["trace"]["eunitary_route"], "amalgam-over-units");
    let text = v["trace"]["presentation"].as_str().unwrap();
    let original = Presentation::parse(&std::fs::read_to_string(pres("uml.pres")).unwrap()).unwrap();
    assert_eq!(Presentation::parse(text).unwrap(), original);
}

#[test]
fn analyze_emits_the_hidden_rewrite() {
    let v = json(&["analyze", pres("ohare_component.pres").to_str().unwrap()]);
    let h = &v["trace"]["hidden_rewrite"];
    assert_eq!(h["reduces_to_original"], true);
    assert!(Presentation::parse(h["presentation"].as_str().unwrap()).is_ok());
    assert_eq!(v["trace"]["pipeline"], "hidden-uml");
}

#[test]
fn analyze_without_relators_is_not_applicable() {
    let path = scratch("empty.pres");
    std::fs::write(&path, "inverse_monoid\ngenerators: a b\n").unwrap();
    let v = json(&["analyze", path.to_str().unwrap()]);
    assert_eq!(v["answer"], "not-applicable");
    for k in ["uniquely_marked", "alphabetically_disjoint", "unital", "eunitary"] {
        assert_eq!(v["trace"][k], "not-applicable", "{k}");
    }
}

#[test]
fn wp_uses_meu_then_stephen() {
    let bicyclic = pres("bicyclic.pres");
    let v = json(&["wp", bicyclic.to_str().unwrap(), "--eq", "a' a", ""]);
    assert_eq!(v["answer"], "false");
    assert_eq!(v["engine"], "meu");
    let uml = pres("uml.pres");
    let v = json(&["wp", uml.to_str().unwrap(), "--eq", "z1 x1 x1 y1 x1 x1 y1 z1", ""]);
    assert_eq!(v["answer"], "equal");
    assert_eq!(v["trace"]["scope"], "M");
    let path = scratch("plain.pres");
    std::fs::write(&path, "inverse_monoid\ngenerators: a b\nrelator: a b a b b\nrelator: a a b b\n").unwrap();
    let v = json(&["wp", path.to_str().unwrap(), "--eq", "a", "b", "--budget", "2"]);
    assert_eq!(v["engine"], "stephen");
    assert_eq!(v["answer"], "unknown");
}

#[test]
fn amalgamate_writes_presentation_and_certificate() {
    let out = scratch("uml_amalgam.pres");
    let v = json(&[
        "amalgamate",
        pres("uml_1.pres").to_str().unwrap(),
        pres("uml_2.pres").to_str().unwrap(),
        "--pair",
        "z1=z2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(v["trace"]["relations"][2], "(z_1)(z_2)^{-1}=1");
    let written = Presentation::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written.relators.len(), 3);
    let cert: EUnitaryCertificate =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("cert.json")).unwrap()).unwrap();
    replay(&cert).unwrap();
}

#[test]
fn amalgamate_failures_exit_nonzero_with_a_reason() {
    let uml1 = pres("uml_1.pres");
    let clash = spim(&["amalgamate", uml1.to_str().unwrap(), uml1.to_str().unwrap(), "--pair", "z1=z1"]);
    assert!(!clash.status.success());
    assert!(String::from_utf8_lossy(&clash.stderr).contains("not certified"));
    let uml2 = pres("uml_2.pres");
    let bad = spim(&["amalgamate", uml1.to_str().unwrap(), uml2.to_str().unwrap(), "--pair", "x1=x2"]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("x1"));
}

#[test]
fn parse_errors_carry_line_and_column() {
    let path = scratch("bad.pres");
    std::fs::write(&path, "group\ngenerators: a\nrelator a b\n").unwrap();
    let out = spim(&["analyze", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3, column 1"));
}

#[test]
fn stephen_writes_dot() {
    let dot = scratch("approximant.dot");
    let v = json(&["stephen", pres("bicyclic.pres").to_str().unwrap(), "--word", "a' a", "--dot", dot.to_str().unwrap()]);
    assert_eq!(v["engine"], "stephen");
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
}

#[test]
fn compare_runs_at_a_small_budget() {
    let v = json(&["compare", pres("aab.pres").to_str().unwrap(), "--budget", "10", "--max-len", "6"]);
    assert_eq!(v["answer"], "true");
    assert_eq!(v["trace"]["rows"].as_array().unwrap().len(), 10);
    assert_eq!(v["trace"]["seed"], 2024);
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use solvlie::scalars::expr::{parse_exppoly, parse_rational};
use solvlie::scalars::VarSet;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solvlie")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

#[test]
fn validate_exit_codes() {
    let ok = run(&["validate", &fixture("algebra_abelian3.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(report(&ok)["pass"], Value::Bool(true));
    let sl2 = run(&["validate", &fixture("algebra_sl2.json")]);
    assert_eq!(sl2.status.code(), Some(1));
    assert_eq!(report(&sl2)["pass"], Value::Bool(false));
}

#[test]
fn multiply_matches_the_golden_law() {
    let out = run(&["multiply", &fixture("algebra_sce1.json"), "--samples", "30", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    let gold: Value = serde_json::from_str(&std::fs::read_to_string(fixture("law_mm.json")).unwrap()).unwrap();
    let chart = VarSet::new(&strings(&r["law"]["source"])).unwrap();
    assert_eq!(strings(&gold["source"]), chart.names());
    for (got, want) in strings(&r["law"]["mu"]).iter().zip(strings(&gold["mu"])) {
        let (got, want) = (parse_exppoly(got, &chart).unwrap(), parse_exppoly(&want, &chart).unwrap());
        assert!(got.approx_eq(&want, 1e-12), "{} vs {}", got.to_text(), want.to_text());
    }
}

#[test]
fn coframe_reports_pass() {
    let out = run(&["coframe", &fixture("algebra_heisenberg.json"), "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["pass"], Value::Bool(true));
}

#[test]
fn reduce_golden_forms() {
    let out = run(&["reduce", &fixture("algebra_sce1.json"), &fixture("forms_mcef.json"), "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    assert_eq!(r["trace"]["complete"], Value::Bool(true));
    assert_eq!(r["trace"]["functions"].as_array().unwrap().len(), 5);

    let partial = run(&["reduce", &fixture("algebra_sce1.json"), &fixture("forms_mcef.json"), "--stop-after", "2"]);
    assert_eq!(partial.status.code(), Some(0));
    let r = report(&partial);
    assert_eq!(r["trace"]["complete"], Value::Bool(false));
    assert_eq!(r["trace"]["remaining"].as_array().unwrap().len(), 3);
}

#[test]
fn pfaff_integrals_match_up_to_constants() {
    let out = run(&["pfaff", &fixture("pfaff_ex1.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    let gold: Value = serde_json::from_str(&std::fs::read_to_string(fixture("integrals_ex1f1f2.json")).unwrap()).unwrap();
    let chart = VarSet::new(&strings(&gold["chart"])).unwrap();
    for (got, want) in strings(&r["functions"]).iter().zip(strings(&gold["functions"])) {
        let diff = parse_rational(got, &chart).unwrap().sub(&parse_rational(&want, &chart).unwrap());
        assert!(diff.constant_value().is_some(), "{got} vs {want}");
    }
}

#[test]
fn errors_exit_with_code_two() {
    let missing = run(&["validate", "/nonexistent/algebra.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(report(&missing)["error"]["code"].is_string());

    let on_pole = run(&["pfaff", &fixture("pfaff_ex1.json"), "--basepoint", "ux=0"]);
    assert_eq!(on_pole.status.code(), Some(2));
    assert_eq!(report(&on_pole)["error"]["code"], "BasepointOnPole");

    let bad_mode = run(&["validate", &fixture("algebra_abelian3.json"), "--mode", "sideways"]);
    assert_eq!(bad_mode.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_file_output_works() {
    let args = ["multiply", &fixture("algebra_heisenberg.json"), "--samples", "25", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);

    let path = std::env::temp_dir().join(format!("solvlie-cli-{}.json", std::process::id()));
    let path_s = path.to_string_lossy().into_owned();
    let mut with_file = args.to_vec();
    with_file.extend(["--output", &path_s]);
    let c = run(&with_file);
    assert!(c.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written, a.stdout);
    let v: Value = serde_json::from_slice(&written).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&serde_json::to_string(&v).unwrap()).unwrap(), v);
}

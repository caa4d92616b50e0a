use std::path::PathBuf;

use serde::Deserialize;

use solvlie::catalog::{a5, heisenberg};
use solvlie::config::VerifyMode;
use solvlie::error::Error;
use solvlie::forms::DiffForm;
use solvlie::io::{forms_from_json, read_json, FormJson};
use solvlie::liealg::AdaptedChain;
use solvlie::liegroup::SolvGroup;
use solvlie::reduction::{reduce_full, reduce_step, rho_map, verify_rho};
use solvlie::sampling::Domain;
use solvlie::scalars::expr::{parse_exppoly, parse_rational};
use solvlie::scalars::{ExpPoly, Rational, RationalFunction, VarSet};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::from_integer(0.into()); n]
}

#[derive(Deserialize)]
struct Law {
    source: Vec<String>,
    mu: Vec<String>,
}

fn mcef() -> (Vec<DiffForm<ExpPoly>>, AdaptedChain) {
    let forms: Vec<FormJson> = read_json(&fixture("forms_mcef.json")).unwrap();
    let (_, chain) = a5(Rational::from_integer(1.into()), Rational::from_integer(2.into())).adapted_chain().unwrap();
    (forms_from_json(&forms).unwrap(), chain)
}

#[test]
fn mcef_reduces_to_the_group_law() {
    let (forms, chain) = mcef();
    let trace = reduce_full(&forms, &chain, &zeros(10), None).unwrap();
    assert!(trace.is_complete());
    assert_eq!(trace.steps.len(), 5);
    let law: Law = read_json(&fixture("law_mm.json")).unwrap();
    let chart = VarSet::new(&law.source).unwrap();
    for (got, want) in trace.functions().iter().zip(&law.mu) {
        let want = parse_exppoly(want, &chart).unwrap();
        // potentials vanish at the origin; the law does too
        assert!(got.approx_eq(&want, 1e-12), "{} vs {}", got.to_text(), want.to_text());
    }
    assert!(trace.reassembly_holds().unwrap());
    assert!(trace.basepoint_values().unwrap().iter().all(|v| v.abs() < 1e-14));
    let auto = trace.automorphism_check(&Domain::cube(10, 0.7), 30, 11, 1e-9);
    assert!(auto.pass, "{auto:?}");
}

#[test]
fn rho_pulls_the_coframe_back() {
    let (forms, chain) = mcef();
    let trace = reduce_full(&forms, &chain, &zeros(10), None).unwrap();
    let group = SolvGroup::new(&chain).unwrap();
    let target = VarSet::numbered("z", 5);
    let map: Vec<usize> = (0..5).collect();
    let tau: Vec<_> = group.coframe.iter().map(|t| t.embed(&target, &map)).collect();
    let rho = rho_map(&trace, &target).unwrap();
    assert_eq!(rho.comps.len(), 5);
    let check = verify_rho(&trace, &tau, VerifyMode::Auto, &Domain::cube(10, 0.7), 30, 5, 1e-9).unwrap();
    assert!(check.pass, "{check:?}");
    let numeric = verify_rho(&trace, &tau, VerifyMode::Numeric, &Domain::cube(10, 0.7), 30, 5, 1e-9).unwrap();
    assert!(numeric.pass && numeric.samples > 0, "{numeric:?}");
}

#[test]
fn stopping_early_leaves_the_ideal_forms() {
    let (forms, chain) = mcef();
    let trace = reduce_full(&forms, &chain, &zeros(10), Some(2)).unwrap();
    assert!(!trace.is_complete());
    assert_eq!(trace.steps.len(), 2);
    assert_eq!(trace.remaining.len(), 3);
    assert!(matches!(rho_map(&trace, &VarSet::numbered("z", 5)), Err(Error::InvalidArgument(_))));
    assert!(trace.reassembly_holds().unwrap());
    // a partial run yields the trailing potentials f^4, f^5
    let full = reduce_full(&forms, &chain, &zeros(10), None).unwrap();
    for (a, b) in trace.functions().iter().zip(&full.functions()[3..]) {
        assert!(a.approx_eq(b, 1e-14));
    }
}

#[test]
fn first_step_integrates_the_last_form() {
    let (forms, chain) = mcef();
    let (f, factor, rest) = reduce_step(&forms, &chain, 0, &zeros(10)).unwrap();
    let chart = forms[0].chart().clone();
    assert!(f.approx_eq(&parse_exppoly("x5 + y5", &chart).unwrap(), 1e-14));
    assert_eq!(factor.len(), 5);
    assert_eq!(rest.len(), 4);
    assert!(matches!(reduce_step(&rest, &chain, 0, &zeros(10)), Err(Error::InvalidArgument(_))));
}

#[test]
fn heisenberg_rational_forms() {
    let chart = VarSet::numbered("x", 3);
    let rf = |s: &str| parse_rational(s, &chart).unwrap();
    // dω¹ = -ω² ∧ ω³ for [e2, e3] = e1
    let forms: Vec<DiffForm<RationalFunction>> = vec![
        DiffForm::from_terms(&chart, 1, vec![(vec![0], rf("1")), (vec![1], rf("x3"))]),
        DiffForm::dx(&chart, 1),
        DiffForm::dx(&chart, 2),
    ];
    let (_, chain) = heisenberg().adapted_chain().unwrap();
    let trace = reduce_full(&forms, &chain, &zeros(3), None).unwrap();
    // the forms are the left-invariant coframe, so the potentials are the coordinates
    for (i, f) in trace.functions().iter().enumerate() {
        assert_eq!(f.to_rational().unwrap(), rf(&format!("x{}", i + 1)));
    }
    assert!(trace.reassembly_holds().unwrap());
    let json = trace.to_json();
    assert!(json.complete);
    assert_eq!(json.functions.len(), 3);
}

#[test]
fn inconsistent_constants_are_rejected() {
    let (forms, _) = mcef();
    let (_, wrong) = a5(Rational::from_integer(2.into()), Rational::from_integer(2.into())).adapted_chain().unwrap();
    assert!(matches!(reduce_full(&forms, &wrong, &zeros(10), None), Err(Error::ResidualNonzero { .. })));
}

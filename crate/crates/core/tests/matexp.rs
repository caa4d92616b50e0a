use nalgebra::DMatrix;
use proptest::prelude::*;

use solvlie::catalog::golden3;
use solvlie::error::Error;
use solvlie::linalg::RatMatrix;
use solvlie::matexp::{charpoly, exp_identities_check, nilpotent_exp, spectrum, sym_exp};
use solvlie::scalars::expr::parse_rational;
use solvlie::scalars::{Rational, Scalar, VarSet};

fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
    (a - b).amax() <= tol * b.amax().max(1.0)
}

fn matches_oracle(a: &RatMatrix, tol: f64) {
    let e = sym_exp(a, "t").unwrap();
    let af = a.to_f64();
    for &t in &[-1.3, -0.2, 0.0, 0.5, 1.0, 2.1] {
        let want = (&af * t).exp();
        assert!(close(&e.eval(t), &want, tol), "t = {t}: {}\nvs {want}", e.eval(t));
    }
}

#[test]
fn rotation() {
    let a = RatMatrix::from_i64(&[&[0, -1], &[1, 0]]);
    let e = sym_exp(&a, "t").unwrap();
    let c = e.eval(0.7);
    assert!((c[(0, 0)] - 0.7f64.cos()).abs() < 1e-14);
    assert!((c[(1, 0)] - 0.7f64.sin()).abs() < 1e-14);
    matches_oracle(&a, 1e-12);
}

#[test]
fn jordan_blocks() {
    matches_oracle(&RatMatrix::from_i64(&[&[2, 1, 0], &[0, 2, 1], &[0, 0, 2]]), 1e-12);
    matches_oracle(&RatMatrix::from_i64(&[&[0, 1, 0, 0], &[-1, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]), 1e-11);
}

#[test]
fn irrational_spectrum() {
    let ad = golden3().ad_matrix(2);
    let sp = spectrum(&ad).unwrap();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    assert!(sp.iter().any(|e| (e.re.abs() - golden).abs() < 1e-12 && e.exact.is_none()));
    matches_oracle(&ad, 1e-11);
    let rep = exp_identities_check(&sym_exp(&ad, "t").unwrap(), 40, 3, 1e-9).unwrap();
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn charpoly_of_companion() {
    // companion of t^3 - 2t^2 + 3t - 5
    let a = RatMatrix::from_i64(&[&[0, 0, 5], &[1, 0, -3], &[0, 1, 2]]);
    let p = charpoly(&a);
    let want: Vec<Rational> = [-5, 3, -2, 1].iter().map(|&c| Rational::from_integer(c.into())).collect();
    assert_eq!(p.0, want);
}

#[test]
fn near_degenerate_spectrum_is_rejected() {
    let tiny = Rational::new(1.into(), 10_000_000_000i64.into());
    let mut a = RatMatrix::identity(2);
    a.set(1, 1, Rational::from_integer(1.into()) + tiny);
    assert!(matches!(spectrum(&a), Err(Error::EigenvalueClusterAmbiguity(_))));
    assert!(matches!(sym_exp(&a, "t"), Err(Error::EigenvalueClusterAmbiguity(_))));
}

#[test]
fn nilpotent_exponential_is_rational() {
    let c = VarSet::new(&["s"]).unwrap();
    let f = parse_rational("s/(1 + s^2)", &c).unwrap();
    let a = RatMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
    let e = nilpotent_exp(&a, &f).unwrap();
    assert_eq!(e[0][2], f.mul(&f).scale(&Rational::new(1.into(), 2.into())));
    assert_eq!(e[0][1], f);
    assert!(matches!(nilpotent_exp(&RatMatrix::identity(2), &f), Err(Error::NonElementaryInClass(_))));
}

fn small_matrix() -> impl Strategy<Value = RatMatrix> {
    (2usize..=4)
        .prop_flat_map(|n| proptest::collection::vec(-2i64..=2, n * n).prop_map(move |v| (n, v)))
        .prop_map(|(n, v)| {
            RatMatrix::from_rows(v.chunks(n).map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 60, ..ProptestConfig::default() })]

    #[test]
    fn symbolic_exp_matches_scaling_and_squaring(a in small_matrix(), t in -1.0f64..1.0) {
        match sym_exp(&a, "t") {
            Ok(e) => {
                let want = (a.to_f64() * t).exp();
                prop_assert!(close(&e.eval(t), &want, 1e-8), "{} vs {}", e.eval(t), want);
                prop_assert!(e.ode_residual().iter().flatten().all(|r| r.magnitude() < 1e-8 * (1.0 + e.entries.iter().flatten().map(|x| x.magnitude()).fold(0.0, f64::max))));
            }
            Err(Error::EigenvalueClusterAmbiguity(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}

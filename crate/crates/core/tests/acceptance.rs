//! End-to-end acceptance run. Prints one verdict line per criterion and
//! exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use solvlie::catalog::{a5, catalog};
use solvlie::config::VerifyMode;
use solvlie::forms::{potential, DiffForm, PointMap, VectorField};
use solvlie::io::{forms_from_json, read_json, FormJson, PfaffianJson};
use solvlie::liegroup::{multiplication, preadjoint_oracle, verify_group, SolvGroup};
use solvlie::linalg::RatMatrix;
use solvlie::matexp::sym_exp;
use solvlie::pfaffian::{first_integrals, PfaffianSystem, SymmetryAlgebra};
use solvlie::sampling::Domain;
use solvlie::scalars::expr::{parse_exppoly, parse_rational};
use solvlie::scalars::{ExpPoly, Rational, RationalFunction, VarSet};

type RF = RationalFunction;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into() }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Verdict::new(false, detail)
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Verdict) -> Verdict {
    let t0 = Instant::now();
    let v = f();
    let dt = t0.elapsed();
    match limit {
        Some(l) if dt > l => Verdict::fail(format!("{}; took {dt:.2?} > {l:.0?}", v.detail)),
        _ => Verdict::new(v.pass, format!("{}; {dt:.2?}", v.detail)),
    }
}

#[derive(Deserialize)]
struct CoframeGolden {
    coframe: Vec<FormJson>,
}

#[derive(Deserialize)]
struct LawGolden {
    source: Vec<String>,
    mu: Vec<String>,
}

#[derive(Deserialize)]
struct IntegralsGolden {
    chart: Vec<String>,
    functions: Vec<String>,
}

fn forms_close(a: &DiffForm<ExpPoly>, b: &DiffForm<ExpPoly>, tol: f64) -> bool {
    a.components().iter().zip(b.components()).all(|(x, y)| x.approx_eq(&y, tol))
}

fn sce1_group() -> SolvGroup {
    let (_, chain) = a5(q(1), q(2)).adapted_chain().expect("solvable");
    SolvGroup::new(&chain).expect("coframe")
}

fn golden_coframe() -> Verdict {
    let g = sce1_group();
    let gold: CoframeGolden = read_json(&fixture("coframe_ex1forms.json")).unwrap();
    let want: Vec<DiffForm<ExpPoly>> = forms_from_json(&gold.coframe).unwrap();
    let bad: Vec<usize> = (0..5).filter(|&i| !forms_close(&g.coframe[i], &want[i], 1e-10)).map(|i| i + 1).collect();
    Verdict::new(bad.is_empty(), format!("mismatched components {bad:?}"))
}

fn golden_multiplication() -> Verdict {
    let g = sce1_group();
    let law = multiplication(&g).unwrap();
    let gold: LawGolden = read_json(&fixture("law_mm.json")).unwrap();
    let chart = VarSet::new(&gold.source).unwrap();
    if chart != law.doubled {
        return Verdict::fail(format!("doubled chart {:?}", law.doubled.names()));
    }
    let exact = gold.mu.iter().zip(&law.mu.comps).all(|(s, m)| parse_exppoly(s, &chart).unwrap().approx_eq(m, 1e-12));
    let rep = verify_group(&law, &g, VerifyMode::Numeric, 100, 7, 1e-8).unwrap();
    let axioms = rep.associativity.pass && rep.identity.pass && rep.ad_homomorphism.pass && rep.left_invariance.pass;
    let worst = [&rep.associativity, &rep.identity, &rep.ad_homomorphism, &rep.left_invariance]
        .iter()
        .map(|c| c.max_rel_err)
        .fold(0.0, f64::max);
    Verdict::new(exact && axioms, format!("mu exact: {exact}; axioms at 100 points, worst rel err {worst:.1e}"))
}

fn golden_integrals() -> Verdict {
    let j: PfaffianJson = read_json(&fixture("pfaff_ex1.json")).unwrap();
    let chart = j.chart().unwrap();
    let sys = PfaffianSystem { chart: chart.clone(), excluded: j.excluded_polys().unwrap(), theta: forms_from_json(&j.theta).unwrap() };
    let fields = j.symmetry.iter().map(|v| v.to_field::<RF>(&chart).unwrap()).collect();
    let sym = SymmetryAlgebra { fields, constants: j.brackets.to_constants().unwrap() };
    let fi = match first_integrals(&sys, &sym, &j.basepoint_values().unwrap()) {
        Ok(fi) => fi,
        Err(e) => return Verdict::fail(format!("pipeline error: {e}")),
    };

    let omex1: Vec<FormJson> = read_json(&fixture("forms_omex1.json")).unwrap();
    let omega_ok = forms_from_json::<RF>(&omex1).unwrap() == fi.omega;

    let gold: IntegralsGolden = read_json(&fixture("integrals_ex1f1f2.json")).unwrap();
    let gchart = VarSet::new(&gold.chart).unwrap();
    let mut fs_ok = Vec::new();
    for (s, f) in gold.functions.iter().zip(&fi.functions) {
        let want = parse_rational(s, &gchart).unwrap();
        let ok = match f.to_rational() {
            Some(got) => got.sub(&want).constant_value().is_some(),
            None => false,
        };
        fs_ok.push(ok);
    }
    let pass = omega_ok && fs_ok.len() == 3 && fs_ok.iter().all(|&b| b);
    Verdict::new(pass, format!("omega exact: {omega_ok}; f1, f2, f3 up to constants: {fs_ok:?}"))
}

fn structure_suite() -> Verdict {
    let mut failures = Vec::new();
    let entries = catalog();
    for (k, (name, c)) in entries.iter().enumerate() {
        let (_, chain) = c.adapted_chain().unwrap();
        let g = SolvGroup::new(&chain).unwrap();
        let residual_zero = g.coframe_residual().iter().all(|r| r.is_zero());
        let brackets = g.frame_bracket_check(&Domain::cube(g.dim(), 1.0), 50, 100 + k as u64, 1e-9).unwrap();
        if !(residual_zero && brackets.pass) {
            failures.push(format!("{name} (residual zero {residual_zero}, bracket err {:.1e})", brackets.max_rel_err));
        }
    }
    Verdict::new(failures.is_empty(), format!("{} algebras; failures {failures:?}", entries.len()))
}

fn cross_oracle() -> Verdict {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let entries = catalog();
    for (k, (name, c)) in entries.iter().enumerate() {
        let (_, chain) = c.adapted_chain().unwrap();
        let g = SolvGroup::new(&chain).unwrap();
        let law = multiplication(&g).unwrap();
        match preadjoint_oracle(&g, &law, 100, 200 + k as u64, 1e-8) {
            Ok(r) => {
                worst = worst.max(r.agreement.max_rel_err);
                if !r.pass {
                    failures.push(name.clone());
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    Verdict::new(failures.is_empty(), format!("{} algebras, worst rel err {worst:.1e}; failures {failures:?}", entries.len()))
}

fn random_rational(rng: &mut ChaCha8Rng, max: i64) -> String {
    let n = rng.gen_range(-max..=max);
    let d = [1, 2, 4][rng.gen_range(0..3)];
    format!("({n}/{d})")
}

/// Sum of up to three terms `c * monomial * exp(linear) * trig(linear)` in `x1..x3`.
fn random_exppoly(rng: &mut ChaCha8Rng, chart: &VarSet) -> ExpPoly {
    let terms = rng.gen_range(1..=3);
    let mut parts = Vec::new();
    for _ in 0..terms {
        let mut t = vec![random_rational(rng, 3)];
        for v in 1..=3 {
            let p = rng.gen_range(0..=2);
            if p > 0 {
                t.push(format!("x{v}^{p}"));
            }
        }
        let rates: Vec<String> = (1..=3).map(|v| format!("{}*x{v}", random_rational(rng, 2))).collect();
        if rng.gen_bool(0.6) {
            t.push(format!("exp({})", rates.join(" + ")));
        }
        if rng.gen_bool(0.5) {
            let k: Vec<String> = (1..=3).map(|v| format!("{}*x{v}", rng.gen_range(-2..=2))).collect();
            let f = if rng.gen_bool(0.5) { "cos" } else { "sin" };
            t.push(format!("{f}({})", k.join(" + ")));
        }
        parts.push(t.join("*"));
    }
    parse_exppoly(&parts.join(" + "), chart).unwrap()
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
        }
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), eps, 40)
}

fn quadrature_oracle() -> Verdict {
    let chart = VarSet::numbered("x", 3);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let origin = vec![q(0); 3];
    let mut recovered = 0;
    let mut line_ok = 0;
    let mut worst_line: f64 = 0.0;
    for case in 0..50 {
        let f = random_exppoly(&mut rng, &chart);
        let omega = DiffForm::function(f.clone()).exterior_d();
        let Ok(pot) = potential(&omega, &origin) else { continue };
        let shifted = f.sub(&ExpPoly::constant(&chart, f.evaluate(&[0.0; 3])));
        if pot.approx_eq(&shifted, 1e-9) {
            recovered += 1;
        }
        if case < 20 {
            let a: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let b: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let comps = omega.components();
            let integrand = |t: f64| {
                let p: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + t * (y - x)).collect();
                comps.iter().enumerate().map(|(i, c)| c.evaluate(&p) * (b[i] - a[i])).sum::<f64>()
            };
            let line = adaptive_simpson(&integrand, 0.0, 1.0, 1e-13);
            let exact = pot.evaluate(&b) - pot.evaluate(&a);
            let err = (line - exact).abs() / exact.abs().max(1.0);
            worst_line = worst_line.max(err);
            if err <= 1e-8 {
                line_ok += 1;
            }
        }
    }
    Verdict::new(
        recovered == 50 && line_ok == 20,
        format!("{recovered}/50 potentials recovered; {line_ok}/20 line integrals agree, worst {worst_line:.1e}"),
    )
}

fn random_poly_text(rng: &mut ChaCha8Rng, vars: &[&str]) -> String {
    let terms = rng.gen_range(1..=3);
    (0..terms)
        .map(|_| {
            let mut t = vec![format!("({})", rng.gen_range(-3..=3))];
            for v in vars {
                let p = rng.gen_range(0..=2);
                if p > 0 {
                    t.push(format!("{v}^{p}"));
                }
            }
            t.join("*")
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn random_rf_form(rng: &mut ChaCha8Rng, chart: &VarSet, degree: usize) -> DiffForm<RF> {
    let names: Vec<&str> = chart.names().iter().map(String::as_str).collect();
    let n = chart.len();
    let mut terms = Vec::new();
    let mut idx: Vec<usize> = (0..degree).collect();
    loop {
        let num = random_poly_text(rng, &names);
        let c = if rng.gen_bool(0.3) {
            format!("({num})/(1 + {}^2)", names[rng.gen_range(0..n)])
        } else {
            num
        };
        terms.push((idx.clone(), parse_rational(&c, chart).unwrap()));
        // next increasing multi-index
        let mut k = degree;
        loop {
            if k == 0 {
                return DiffForm::from_terms(chart, degree, terms);
            }
            k -= 1;
            if idx[k] < n - degree + k {
                idx[k] += 1;
                for m in k + 1..degree {
                    idx[m] = idx[m - 1] + 1;
                }
                break;
            }
        }
    }
}

fn random_exp_form(rng: &mut ChaCha8Rng, chart: &VarSet) -> DiffForm<ExpPoly> {
    DiffForm::from_components(chart, (0..chart.len()).map(|_| random_exppoly(rng, chart)).collect())
}

fn random_exp_field(rng: &mut ChaCha8Rng, chart: &VarSet) -> VectorField<ExpPoly> {
    VectorField::new(chart, (0..chart.len()).map(|_| random_exppoly(rng, chart)).collect())
}

fn scaled_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

fn property_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let c3 = VarSet::numbered("x", 3);
    let c4 = VarSet::numbered("x", 4);
    let target = VarSet::numbered("y", 3);
    let mut counts = [0usize; 5];
    let mut cases = 0;

    for k in 0..100 {
        cases += 1;
        let ok = if k % 2 == 0 {
            random_exp_form(&mut rng, &c3).exterior_d().exterior_d().is_zero()
        } else {
            let deg = rng.gen_range(0..=2);
            random_rf_form(&mut rng, &c4, deg).exterior_d().exterior_d().is_zero()
        };
        counts[0] += ok as usize;
    }

    for _ in 0..100 {
        cases += 1;
        let p = rng.gen_range(0..=2);
        let qd = rng.gen_range(0..=3 - p);
        let a = random_rf_form(&mut rng, &c4, p);
        let b = random_rf_form(&mut rng, &c4, qd);
        let lhs = a.wedge(&b).exterior_d();
        let second = a.wedge(&b.exterior_d());
        let rhs = a.exterior_d().wedge(&b).add(&if p % 2 == 0 { second } else { second.neg() });
        counts[1] += lhs.sub(&rhs).is_zero() as usize;
    }

    for _ in 0..100 {
        cases += 1;
        let comps: Vec<RF> =
            (0..3).map(|_| parse_rational(&random_poly_text(&mut rng, &["x1", "x2", "x3"]), &c3).unwrap()).collect();
        let map = PointMap::new(&target, comps).unwrap();
        let deg = rng.gen_range(0..=2);
        let alpha = random_rf_form(&mut rng, &target, deg);
        let lhs = alpha.exterior_d().pullback(&map).unwrap();
        let rhs = alpha.pullback(&map).unwrap().exterior_d();
        counts[2] += (lhs == rhs) as usize;
    }

    for _ in 0..100 {
        cases += 1;
        let [x, y, z] = [0, 1, 2].map(|_| random_exp_field(&mut rng, &c3));
        let p: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let parts = [
            x.lie_bracket(&y.lie_bracket(&z).unwrap()).unwrap(),
            y.lie_bracket(&z.lie_bracket(&x).unwrap()).unwrap(),
            z.lie_bracket(&x.lie_bracket(&y).unwrap()).unwrap(),
        ];
        let vals: Vec<Vec<f64>> = parts.iter().map(|v| v.evaluate(&p).unwrap()).collect();
        let sum: Vec<f64> = (0..3).map(|i| vals.iter().map(|v| v[i]).sum()).collect();
        let scale = vals.iter().map(|v| scaled_norm(v)).fold(1.0, f64::max);
        counts[3] += (scaled_norm(&sum) / scale <= 1e-8) as usize;
    }

    for _ in 0..100 {
        cases += 1;
        let n = rng.gen_range(2..=4);
        let rows: Vec<Vec<Rational>> = (0..n).map(|_| (0..n).map(|_| q(rng.gen_range(-2..=2))).collect()).collect();
        let a = RatMatrix::from_rows(rows);
        let t: f64 = rng.gen_range(-1.0..1.0);
        let ok = match sym_exp(&a, "t") {
            Ok(e) => {
                let oracle: DMatrix<f64> = (a.to_f64() * t).exp();
                let got = e.eval(t);
                (got - &oracle).abs().max() / oracle.abs().max().max(1.0) <= 1e-8
            }
            Err(_) => false,
        };
        counts[4] += ok as usize;
    }

    let pass = counts.iter().all(|&c| c == 100);
    Verdict::new(
        pass,
        format!("{cases} cases; d∘d {}, antiderivation {}, pullback {}, Jacobi {}, exp {}", counts[0], counts[1], counts[2], counts[3], counts[4]),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Option<Duration>, fn() -> Verdict)> = vec![
        ("golden coframe", Some(Duration::from_secs(1)), golden_coframe),
        ("golden multiplication", Some(Duration::from_secs(10)), golden_multiplication),
        ("golden first integrals", Some(Duration::from_secs(5)), golden_integrals),
        ("structure equations over the catalog", None, structure_suite),
        ("pre-adjoint cross-oracle", None, cross_oracle),
        ("quadrature oracle", None, quadrature_oracle),
        ("property suite", None, property_suite),
    ];
    let mut all = true;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let v = timed(limit, f);
        all &= v.pass;
        println!("criterion {}: {} {name} ({})", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

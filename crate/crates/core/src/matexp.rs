//! Closed-form `exp(tA)` for rational matrices.
//!
//! The characteristic polynomial is computed exactly and split into
//! square-free factors, so multiplicities are exact. Rational roots are
//! found exactly; the remaining roots numerically. Putzer's recursion over
//! the resulting spectrum gives `exp(tA) = Σ r_k(t) P_k`, with complex
//! conjugate pairs folded into real `cos`/`sin` terms.

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::scalars::qpoly::QPoly;
use crate::scalars::{cluster_tol, rat_to_f64, ExpPoly, Rational, Scalar, Term, TrigKind, VarSet};

/// Exact characteristic polynomial `det(λI - A)` (Faddeev–LeVerrier).
pub fn charpoly(a: &RatMatrix) -> QPoly {
    let n = a.nrows();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut m = RatMatrix::zeros(n, n);
    for k in 1..=n {
        let am = a.mul(&m);
        m = am.add(&RatMatrix::identity(n).scale(&c[n + 1 - k]));
        let tr = a.mul(&m).trace();
        c[n - k] = -tr / Rational::from_integer(BigInt::from(k));
    }
    QPoly::new(c)
}

/// One eigenvalue with its algebraic multiplicity.
#[derive(Clone, Debug, Serialize)]
pub struct Eigen {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub exact: Option<String>,
}

/// Spectrum with exact multiplicities; conjugate pairs are adjacent.
pub fn spectrum(a: &RatMatrix) -> Result<Vec<Eigen>> {
    let p = charpoly(a);
    let mut out: Vec<Eigen> = Vec::new();
    for (mult, factor) in p.squarefree() {
        let mut rest = factor.clone();
        if let Some(roots) = factor.rational_roots() {
            for r in roots {
                out.push(Eigen { re: rat_to_f64(&r), im: 0.0, multiplicity: mult, exact: Some(crate::scalars::poly::fmt_rational(&r)) });
                rest = rest.divrem(&QPoly::new(vec![-r.clone(), Rational::one()])).0;
            }
        }
        for z in rest.numeric_roots() {
            if z.im < 0.0 {
                continue;
            }
            out.push(Eigen { re: z.re, im: z.im, multiplicity: mult, exact: None });
        }
    }
    out.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap()));
    let tol = cluster_tol();
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let d = Complex64::new(out[i].re - out[j].re, out[i].im - out[j].im).norm();
            let d2 = Complex64::new(out[i].re - out[j].re, out[i].im + out[j].im).norm();
            if d.min(d2) <= tol {
                return Err(Error::EigenvalueClusterAmbiguity(format!(
                    "eigenvalues {}{:+}i and {}{:+}i are closer than {tol}",
                    out[i].re, out[i].im, out[j].re, out[j].im
                )));
            }
        }
        if out[i].im != 0.0 && out[i].im <= tol {
            return Err(Error::EigenvalueClusterAmbiguity(format!(
                "eigenvalue {}{:+}i is within {tol} of its conjugate",
                out[i].re, out[i].im
            )));
        }
    }
    Ok(out)
}

/// `c · t^p · e^{λt}` with complex `c`, `λ`; `root` identifies `λ` exactly.
#[derive(Clone, Debug)]
struct CTerm {
    c: Complex64,
    p: u32,
    lambda: Complex64,
    root: usize,
}

/// `e^{μt} ∫_0^t e^{-μs} r(s) ds`
fn putzer_step(r: &[CTerm], mu: Complex64, mu_root: usize) -> Vec<CTerm> {
    let mut out: Vec<CTerm> = Vec::new();
    for term in r {
        let j = term.p;
        if term.root == mu_root {
            out.push(CTerm { c: term.c / (j as f64 + 1.0), p: j + 1, lambda: mu, root: mu_root });
            continue;
        }
        // ∫_0^t s^j e^{νs} ds = F(t) - F(0), F(s) = e^{νs} Σ_i (-1)^i j!/(j-i)! s^{j-i} / ν^{i+1}
        let nu = term.lambda - mu;
        let mut falling = 1.0;
        let mut np = nu;
        let mut f0 = Complex64::zero();
        for i in 0..=j {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let w = term.c * (sign * falling) / np;
            out.push(CTerm { c: w, p: j - i as u32, lambda: term.lambda, root: term.root });
            if i == j {
                f0 = w;
            }
            falling *= (j - i as u32) as f64;
            np *= nu;
        }
        out.push(CTerm { c: -f0, p: 0, lambda: mu, root: mu_root });
    }
    out
}

/// `exp(tA)` as a matrix of exponential polynomials in one variable.
#[derive(Clone, Debug)]
pub struct ExpMatrix {
    pub source: RatMatrix,
    pub var: String,
    pub chart: VarSet,
    pub entries: Vec<Vec<ExpPoly>>,
}

pub fn sym_exp(a: &RatMatrix, var: &str) -> Result<ExpMatrix> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    let chart = VarSet::new(&[var])?;
    if a.is_zero() {
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { ExpPoly::one(&chart) } else { ExpPoly::zero(&chart) }).collect())
            .collect();
        return Ok(ExpMatrix { source: a.clone(), var: var.into(), chart, entries });
    }
    // λ list with multiplicity, conjugates included
    let mut lambdas: Vec<(Complex64, usize)> = Vec::new();
    for (idx, e) in spectrum(a)?.iter().enumerate() {
        for _ in 0..e.multiplicity {
            lambdas.push((Complex64::new(e.re, e.im), 2 * idx));
        }
        if e.im != 0.0 {
            for _ in 0..e.multiplicity {
                lambdas.push((Complex64::new(e.re, -e.im), 2 * idx + 1));
            }
        }
    }
    debug_assert_eq!(lambdas.len(), n);
    let af: DMatrix<Complex64> = a.to_f64().map(|x| Complex64::new(x, 0.0));
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut pk = id.clone();
    let mut r = vec![CTerm { c: Complex64::one(), p: 0, lambda: lambdas[0].0, root: lambdas[0].1 }];
    let mut acc: Vec<Vec<Vec<CTerm>>> = vec![vec![Vec::new(); n]; n];
    for k in 0..n {
        if k > 0 {
            pk = &pk * (&af - &id * lambdas[k - 1].0);
            r = putzer_step(&r, lambdas[k].0, lambdas[k].1);
        }
        for i in 0..n {
            for j in 0..n {
                let pij = pk[(i, j)];
                if pij.norm() == 0.0 {
                    continue;
                }
                for t in &r {
                    acc[i][j].push(CTerm { c: t.c * pij, ..t.clone() });
                }
            }
        }
    }
    let entries = acc
        .into_iter()
        .map(|row| row.into_iter().map(|cts| to_real(&chart, &cts)).collect())
        .collect();
    Ok(ExpMatrix { source: a.clone(), var: var.into(), chart, entries })
}

/// Real part of a complex exponential polynomial.
fn to_real(chart: &VarSet, cts: &[CTerm]) -> ExpPoly {
    let mut ts = Vec::with_capacity(cts.len() * 2);
    for t in cts {
        // Re(c e^{(a+ib)t}) = e^{at} (Re c · cos bt - Im c · sin bt)
        let a = t.lambda.re;
        let b = t.lambda.im;
        let base = Term { coeff: 0.0, powers: vec![t.p], exp_rates: vec![a], trig_rates: vec![b], kind: TrigKind::One };
        if b == 0.0 {
            ts.push(Term { coeff: t.c.re, ..base });
        } else {
            ts.push(Term { coeff: t.c.re, kind: TrigKind::Cos, ..base.clone() });
            ts.push(Term { coeff: -t.c.im, kind: TrigKind::Sin, ..base });
        }
    }
    ExpPoly::from_terms(chart, ts)
}

impl ExpMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Entries with the variable replaced by `f`.
    pub fn at(&self, f: &ExpPoly) -> Result<Vec<Vec<ExpPoly>>> {
        let target = f.chart().clone();
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.substitute(&target, std::slice::from_ref(f))).collect())
            .collect()
    }

    pub fn eval(&self, t: f64) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.entries[i][j].evaluate(&[t]))
    }

    /// `dE/dt - A E`, which should vanish identically.
    pub fn ode_residual(&self) -> Vec<Vec<ExpPoly>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = self.entries[i][j].diff(0);
                        for k in 0..n {
                            let c = self.source.get(i, k);
                            if !c.is_zero() {
                                acc = acc.sub(&self.entries[k][j].scale(rat_to_f64(c)));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }
}

/// Results of [`exp_identities_check`].
#[derive(Clone, Debug, Serialize)]
pub struct ExpIdentityReport {
    /// `E(t) E(-t) = I` holds symbolically.
    pub inverse_symbolic: bool,
    /// `E(0) = I` and `E' = A E` hold symbolically.
    pub ode_symbolic: bool,
    pub det_max_rel_err: f64,
    pub semigroup_max_rel_err: f64,
    pub samples: usize,
    pub pass: bool,
}

pub fn exp_identities_check(e: &ExpMatrix, samples: usize, seed: u64, tol: f64) -> Result<ExpIdentityReport> {
    let n = e.dim();
    let chart = &e.chart;
    let minus_t = ExpPoly::var(chart, 0).neg();
    let em = e.at(&minus_t)?;
    let mut inverse_symbolic = true;
    for i in 0..n {
        for j in 0..n {
            let mut acc = ExpPoly::zero(chart);
            for k in 0..n {
                acc = acc.add(&e.entries[i][k].mul(&em[k][j]));
            }
            let target = if i == j { ExpPoly::one(chart) } else { ExpPoly::zero(chart) };
            if !acc.approx_eq(&target, tol) {
                inverse_symbolic = false;
            }
        }
    }
    let id0 = e.eval(0.0);
    let ode_symbolic = e.ode_residual().iter().flatten().all(|r| r.max_abs_coeff() <= tol)
        && (id0 - DMatrix::<f64>::identity(n, n)).abs().max() <= tol;
    let tr = rat_to_f64(&e.source.trace());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut det_err: f64 = 0.0;
    let mut semi_err: f64 = 0.0;
    for _ in 0..samples {
        let t: f64 = rng.gen_range(-3.0..3.0);
        let s: f64 = rng.gen_range(-3.0..3.0);
        let d = e.eval(t).determinant();
        let want = (t * tr).exp();
        det_err = det_err.max((d - want).abs() / want.abs().max(1.0));
        let lhs = e.eval(s) * e.eval(t);
        let rhs = e.eval(s + t);
        let scale = rhs.abs().max().max(1.0);
        semi_err = semi_err.max((lhs - rhs).abs().max() / scale);
    }
    let pass = inverse_symbolic && ode_symbolic && det_err <= tol.max(1e-9) && semi_err <= tol.max(1e-8);
    Ok(ExpIdentityReport { inverse_symbolic, ode_symbolic, det_max_rel_err: det_err, semigroup_max_rel_err: semi_err, samples, pass })
}

/// `exp(f A)` for nilpotent `A` with entries in any scalar class.
pub fn nilpotent_exp<S: Scalar>(a: &RatMatrix, f: &S) -> Result<Vec<Vec<S>>> {
    let n = a.nrows();
    let chart = f.chart().clone();
    if !a.is_nilpotent() {
        return Err(Error::NonElementaryInClass(
            "exponential of a non-nilpotent matrix leaves the rational class".into(),
        ));
    }
    let mut out: Vec<Vec<S>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { S::one(&chart) } else { S::zero(&chart) }).collect()).collect();
    let mut ak = RatMatrix::identity(n);
    let mut fk = S::one(&chart);
    let mut fact = Rational::one();
    for k in 1..n {
        ak = ak.mul(a);
        if ak.is_zero() {
            break;
        }
        fk = fk.mul(f);
        fact *= Rational::from_integer(BigInt::from(k));
        let inv = fact.recip();
        for i in 0..n {
            for j in 0..n {
                let c = ak.get(i, j);
                if !c.is_zero() {
                    out[i][j] = out[i][j].add(&fk.scale(&(c * &inv)));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn charpoly_of_rotation_block() {
        let a = RatMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        assert_eq!(charpoly(&a), QPoly::new(vec![r(1), r(0), r(1)]));
    }

    #[test]
    fn zero_matrix_gives_identity() {
        let e = sym_exp(&RatMatrix::zeros(3, 3), "t").unwrap();
        assert_eq!(e.entries[0][0].to_text(), "1");
        assert!(e.entries[0][1].is_zero());
    }

    #[test]
    fn jordan_block_truncates() {
        let a = RatMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let e = sym_exp(&a, "t").unwrap();
        assert_eq!(e.entries[0][2].to_text(), "0.5*t^2");
        assert_eq!(e.entries[0][1].to_text(), "t");
        assert_eq!(e.entries[1][0].to_text(), "0");
    }

    #[test]
    fn rotation_gives_cos_sin() {
        let a = RatMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        let e = sym_exp(&a, "t").unwrap();
        assert_eq!(e.entries[0][0].to_text(), "cos(t)");
        assert_eq!(e.entries[0][1].to_text(), "-sin(t)");
        assert_eq!(e.entries[1][0].to_text(), "sin(t)");
    }

    #[test]
    fn repeated_real_eigenvalue() {
        let a = RatMatrix::from_i64(&[&[2, 1], &[0, 2]]);
        let e = sym_exp(&a, "t").unwrap();
        assert_eq!(e.entries[0][1].to_text(), "t*exp(2*t)");
        let rep = exp_identities_check(&e, 20, 1, 1e-10).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn close_eigenvalues_rejected() {
        let a = RatMatrix::from_rows(vec![vec![r(1), r(0)], vec![r(0), r(1) + Rational::new(1.into(), 100_000_000.into())]]);
        assert!(matches!(sym_exp(&a, "t"), Err(Error::EigenvalueClusterAmbiguity(_))));
    }
}

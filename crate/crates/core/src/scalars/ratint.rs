//! Antiderivatives of rational functions in one variable.
//!
//! The other chart variables are treated as constants, so all univariate
//! arithmetic happens over the field of rational functions in them. The
//! rational part comes from Hermite reduction (Mack's linear variant); the
//! logarithmic part from the Rothstein–Trager resultant, accepted only when
//! every residue is a rational number.

use num::BigInt;

use super::logext::LogExtendedScalar;
use super::qpoly::QPoly;
use super::ratfunc::RationalFunction;
use super::upoly::UPoly;
use super::Rational;
use crate::error::{Error, Result};

/// Some `F` with `dF/dv = f`, without normalization of the constant.
pub fn integrate(f: &RationalFunction, v: usize) -> Result<LogExtendedScalar> {
    let chart = f.chart().clone();
    if f.is_zero() {
        return Ok(LogExtendedScalar::zero(&chart));
    }
    if !f.depends_on(v) {
        return Ok(LogExtendedScalar::from_rational(f.mul(&RationalFunction::var(&chart, v))));
    }
    let num = UPoly::from_poly(&chart, v, f.numer());
    let den = UPoly::from_poly(&chart, v, f.denom());

    // make the denominator monic in v
    let lc_inv = den.lc().recip()?;
    let den = den.scale(&lc_inv);
    let num = num.scale(&lc_inv);

    let (q, r) = num.divrem(&den);
    let mut rational = integrate_polynomial(&q);
    if r.is_zero() {
        return Ok(LogExtendedScalar::from_rational(rational));
    }

    let (g, a, ds) = hermite_reduce(&r, &den)?;
    rational = rational.add(&g);
    if a.is_zero() {
        return Ok(LogExtendedScalar::from_rational(rational));
    }
    let logs = log_part(&a, &ds)?;
    Ok(LogExtendedScalar::new(rational, logs))
}

fn integrate_polynomial(q: &UPoly) -> RationalFunction {
    let chart = &q.chart;
    let x = RationalFunction::var(chart, q.var);
    let mut acc = RationalFunction::zero(chart);
    let mut xp = x.clone();
    for (i, c) in q.coeffs.iter().enumerate() {
        if !c.is_zero() {
            let k = Rational::new(BigInt::from(1), BigInt::from(i + 1));
            acc = acc.add(&c.mul(&xp).scale(&k));
        }
        xp = xp.mul(&x);
    }
    acc
}

/// Returns `(g, a, d)` with `∫ r/den = g + ∫ a/d`, `d` square-free and monic.
fn hermite_reduce(r: &UPoly, den: &UPoly) -> Result<(RationalFunction, UPoly, UPoly)> {
    let chart = &r.chart;
    let mut g = RationalFunction::zero(chart);
    let mut a = r.clone();
    let mut dm = den.gcd(&den.derivative());
    let ds = den.divrem(&dm).0;
    while dm.degree() > 0 {
        let dm2 = dm.gcd(&dm.derivative());
        let dms = dm.divrem(&dm2).0;
        let lhs = ds.mul(&dm.derivative()).divrem(&dm).0.scale(&RationalFunction::constant(chart, -Rational::from_integer(1.into())));
        let (b, c) = UPoly::diophantine(&lhs, &dms, &a)
            .ok_or_else(|| Error::NonElementaryInClass("Hermite reduction failed".into()))?;
        a = c.sub(&b.derivative().mul(&ds).divrem(&dms).0);
        g = g.add(&b.to_rational().div(&dm.to_rational())?);
        dm = dm2;
    }
    Ok((g, a, ds.monic()))
}

/// Log terms of `∫ a/d` for square-free monic `d` and `deg a < deg d`.
fn log_part(a: &UPoly, d: &UPoly) -> Result<Vec<(Rational, super::poly::Poly)>> {
    let chart = &a.chart;
    let n = d.degree();
    let dp = d.derivative();
    // resultant in c sampled at c = 0..n, then interpolated
    let xs: Vec<Rational> = (0..=n).map(|i| Rational::from_integer(BigInt::from(i))).collect();
    let mut ys = Vec::with_capacity(n + 1);
    for c in &xs {
        let b = a.sub(&dp.scale(&RationalFunction::constant(chart, c.clone())));
        ys.push(d.resultant(&b));
    }
    let coeffs = interpolate(chart, &xs, &ys);
    let lead = coeffs
        .iter()
        .rev()
        .find(|c| !c.is_zero())
        .cloned()
        .ok_or_else(|| Error::NonElementaryInClass("vanishing resultant".into()))?;
    let lead_inv = lead.recip()?;
    let mut qc = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let c = c.mul(&lead_inv);
        match c.constant_value() {
            Some(v) => qc.push(v),
            None => {
                return Err(Error::NonElementaryInClass(
                    "residues depend on the remaining variables".into(),
                ))
            }
        }
    }
    let res = QPoly::new(qc);
    let roots = res
        .rational_roots()
        .ok_or_else(|| Error::NonElementaryInClass("residue polynomial too large".into()))?;
    let mut out = Vec::new();
    let mut total = 0;
    for c in roots {
        let b = a.sub(&dp.scale(&RationalFunction::constant(chart, c.clone())));
        let g = d.gcd(&b);
        if g.degree() == 0 {
            continue;
        }
        total += g.degree();
        let arg = g.to_rational();
        out.push((c, arg.numer().clone()));
    }
    if total != n {
        return Err(Error::NonElementaryInClass(format!(
            "logarithmic part needs irrational or complex residues (denominator {})",
            d.to_rational()
        )));
    }
    Ok(out)
}

/// Newton interpolation; returns coefficients low degree first.
fn interpolate(
    chart: &super::VarSet,
    xs: &[Rational],
    ys: &[RationalFunction],
) -> Vec<RationalFunction> {
    let n = xs.len();
    let mut dd: Vec<RationalFunction> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let h = (&xs[i] - &xs[i - j]).recip();
            dd[i] = dd[i].sub(&dd[i - 1]).scale(&h);
        }
    }
    // expand Newton form
    let mut poly: Vec<RationalFunction> = vec![RationalFunction::zero(chart)];
    for k in (0..n).rev() {
        // poly = poly * (c - xs[k]) + dd[k]
        let mut next = vec![RationalFunction::zero(chart); poly.len() + 1];
        for (i, p) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(p);
            next[i] = next[i].sub(&p.scale(&xs[k]));
        }
        next[0] = next[0].add(&dd[k]);
        poly = next;
    }
    while poly.len() > 1 && poly.last().map_or(false, |c| c.is_zero()) {
        poly.pop();
    }
    if poly.iter().all(|c| c.is_zero()) {
        poly.clear();
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::VarSet;

    fn chart() -> VarSet {
        VarSet::new(&["x", "y"]).unwrap()
    }

    fn rf(s: &str) -> RationalFunction {
        crate::scalars::expr::parse_rational(s, &chart()).unwrap()
    }

    fn check(s: &str) -> LogExtendedScalar {
        let f = rf(s);
        let big = integrate(&f, 0).unwrap();
        assert_eq!(big.diff(0), f, "integrand {s}");
        big
    }

    #[test]
    fn polynomial_and_power() {
        check("3*x^2*y + 1");
        let i = check("1/x^2");
        assert_eq!(i.to_rational().unwrap(), rf("-1/x"));
    }

    #[test]
    fn logs_with_rational_residues() {
        let i = check("1/x");
        assert_eq!(i.log_terms().len(), 1);
        check("(2*x + 1)/(x^2 - 1)");
        check("2*x/(x^2 - y^2)");
        check("y^2/(x*(x + y)^2)");
        check("(x^4 + 3)/(x^3*(x - 2)^2)");
    }

    #[test]
    fn irrational_residues_rejected() {
        let f = rf("1/(x^2 + 1)");
        assert!(matches!(integrate(&f, 0), Err(Error::NonElementaryInClass(_))));
        let f = rf("1/(x^2 - y^2)");
        assert!(matches!(integrate(&f, 0), Err(Error::NonElementaryInClass(_))));
        let f = rf("1/(x^2 - 2)");
        assert!(matches!(integrate(&f, 0), Err(Error::NonElementaryInClass(_))));
    }

    #[test]
    fn free_variable_is_constant() {
        let i = check("y^2/(y + 1)");
        assert_eq!(i.to_rational().unwrap(), rf("x*y^2/(y + 1)"));
    }
}

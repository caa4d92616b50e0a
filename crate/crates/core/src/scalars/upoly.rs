//! Univariate polynomials in one chart variable whose coefficients are
//! rational functions free of that variable. Used by the rational integrator.

use num::BigInt;

use super::poly::Poly;
use super::ratfunc::RationalFunction;
use super::{Rational, VarSet};

#[derive(Clone, Debug, PartialEq)]
pub struct UPoly {
    pub chart: VarSet,
    pub var: usize,
    /// low degree first, no trailing zeros
    pub coeffs: Vec<RationalFunction>,
}

impl UPoly {
    pub fn new(chart: &VarSet, var: usize, mut coeffs: Vec<RationalFunction>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { chart: chart.clone(), var, coeffs }
    }

    pub fn zero(chart: &VarSet, var: usize) -> Self {
        UPoly { chart: chart.clone(), var, coeffs: Vec::new() }
    }

    pub fn constant(c: RationalFunction, var: usize) -> Self {
        let chart = c.chart().clone();
        UPoly::new(&chart, var, vec![c])
    }

    /// Split a polynomial in all chart variables by powers of `var`.
    pub fn from_poly(chart: &VarSet, var: usize, p: &Poly) -> Self {
        let coeffs = p.as_univariate(var).into_iter().map(|c| RationalFunction::from_poly(chart, c)).collect();
        UPoly::new(chart, var, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> RationalFunction {
        self.coeffs.last().cloned().unwrap_or_else(|| RationalFunction::zero(&self.chart))
    }

    fn coeff(&self, i: usize) -> RationalFunction {
        self.coeffs.get(i).cloned().unwrap_or_else(|| RationalFunction::zero(&self.chart))
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new(&self.chart, self.var, (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new(&self.chart, self.var, (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(&self.chart, self.var);
        }
        let mut c = vec![RationalFunction::zero(&self.chart); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        UPoly::new(&self.chart, self.var, c)
    }

    pub fn scale(&self, k: &RationalFunction) -> UPoly {
        UPoly::new(&self.chart, self.var, self.coeffs.iter().map(|c| c.mul(k)).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().recip().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            &self.chart,
            self.var,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&Rational::from_integer(BigInt::from(i))))
                .collect(),
        )
    }

    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return (UPoly::zero(&self.chart, self.var), self.clone());
        }
        let dd = d.degree();
        let inv = d.lc().recip().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let mut q = vec![RationalFunction::zero(&self.chart); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul(&inv);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].sub(&c.mul(dc));
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(&self.chart, self.var, q), UPoly::new(&self.chart, self.var, r))
    }

    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Solve `s*a + t*b = c` with `deg s < deg b` (requires gcd(a, b) | c).
    pub fn diophantine(a: &UPoly, b: &UPoly, c: &UPoly) -> Option<(UPoly, UPoly)> {
        let (g, s0, _t0) = extended_gcd(a, b);
        let (q, r) = c.divrem(&g);
        if !r.is_zero() {
            return None;
        }
        let s = s0.mul(&q);
        let (_, s) = s.divrem(b);
        // t = (c - s a) / b
        let (t, rem) = c.sub(&s.mul(a)).divrem(b);
        if !rem.is_zero() {
            return None;
        }
        Some((s, t))
    }

    pub fn eval_constant(&self, x: &RationalFunction) -> RationalFunction {
        let mut acc = RationalFunction::zero(&self.chart);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Reassemble as a rational function in all chart variables.
    pub fn to_rational(&self) -> RationalFunction {
        let v = RationalFunction::var(&self.chart, self.var);
        self.eval_constant(&v)
    }

    /// Resultant over the coefficient field via the Euclidean remainder sequence.
    pub fn resultant(&self, o: &UPoly) -> RationalFunction {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero(&self.chart);
        }
        let m = self.degree();
        let n = o.degree();
        if n == 0 {
            return o.lc().pow(m as i32).expect("nonnegative power");
        }
        if m == 0 {
            return self.lc().pow(n as i32).expect("nonnegative power");
        }
        let (_, r) = self.divrem(o);
        if r.is_zero() {
            return RationalFunction::zero(&self.chart);
        }
        let k = r.degree();
        let sign = if (m * n) % 2 == 1 { -1 } else { 1 };
        let factor = o.lc().pow((m - k) as i32).expect("nonnegative power");
        o.resultant(&r).mul(&factor).scale(&Rational::from_integer(BigInt::from(sign)))
    }
}

/// `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn extended_gcd(a: &UPoly, b: &UPoly) -> (UPoly, UPoly, UPoly) {
    let chart = &a.chart;
    let var = a.var;
    let one = UPoly::constant(RationalFunction::one(chart), var);
    let zero = UPoly::zero(chart, var);
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (one.clone(), zero.clone());
    let (mut t0, mut t1) = (zero, one);
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    if r0.is_zero() {
        return (r0, s0, t0);
    }
    let inv = r0.lc().recip().expect("nonzero");
    (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
}

//! Exponential polynomials: finite sums of
//! `c · x^k · exp(a·x) · {1 | cos(b·x) | sin(b·x)}`.
//!
//! Products of trigonometric factors are rewritten with product-to-sum
//! identities and the trig rate vector is sign-normalized (first nonzero
//! entry positive), so every value has a unique canonical term list and
//! zero-testing reduces to "no terms left". Rates are compared on a fixed
//! dyadic grid; coefficients at or below [`super::zero_tol`] are dropped.

use std::cmp::Ordering;
use std::fmt;

use num::complex::Complex64;

use super::{zero_tol, VarSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrigKind {
    One,
    Cos,
    Sin,
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coeff: f64,
    pub powers: Vec<u32>,
    pub exp_rates: Vec<f64>,
    pub trig_rates: Vec<f64>,
    pub kind: TrigKind,
}

const GRID: f64 = (1u64 << 28) as f64;

fn quant(r: f64) -> i64 {
    (r * GRID).round() as i64
}

fn snap(r: f64) -> f64 {
    let q = (r * GRID).round() / GRID;
    if (r - q).abs() <= 1e-11 * r.abs().max(1.0) {
        q
    } else {
        r
    }
}

fn cmp_rates(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match quant(*x).cmp(&quant(*y)) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

fn rates_zero(a: &[f64]) -> bool {
    a.iter().all(|&r| quant(r) == 0)
}

impl Term {
    fn key_cmp(&self, o: &Term) -> Ordering {
        self.powers
            .cmp(&o.powers)
            .then_with(|| cmp_rates(&self.exp_rates, &o.exp_rates))
            .then_with(|| cmp_rates(&self.trig_rates, &o.trig_rates))
            .then_with(|| self.kind.cmp(&o.kind))
    }

    fn same_key(&self, o: &Term) -> bool {
        self.key_cmp(o) == Ordering::Equal
    }

    /// Canonical trig part; `None` when the term vanishes identically.
    fn normalized(mut self) -> Option<Term> {
        for r in self.exp_rates.iter_mut().chain(self.trig_rates.iter_mut()) {
            *r = snap(*r);
            if quant(*r) == 0 {
                *r = 0.0;
            }
        }
        let trig_zero = rates_zero(&self.trig_rates);
        match self.kind {
            TrigKind::Sin if trig_zero => return None,
            TrigKind::One | TrigKind::Cos if trig_zero || self.kind == TrigKind::One => {
                self.kind = TrigKind::One;
                self.trig_rates.iter_mut().for_each(|r| *r = 0.0);
            }
            _ => {}
        }
        if let Some(first) = self.trig_rates.iter().find(|&&r| r != 0.0) {
            if *first < 0.0 {
                self.trig_rates.iter_mut().for_each(|r| *r = -*r);
                if self.kind == TrigKind::Sin {
                    self.coeff = -self.coeff;
                }
            }
        }
        Some(self)
    }

    fn with_coeff(&self, coeff: f64) -> Term {
        Term { coeff, ..self.clone() }
    }

    fn eval(&self, point: &[f64]) -> f64 {
        let mut v = self.coeff;
        let mut ea = 0.0;
        let mut tb = 0.0;
        for i in 0..point.len() {
            if self.powers[i] > 0 {
                v *= point[i].powi(self.powers[i] as i32);
            }
            ea += self.exp_rates[i] * point[i];
            tb += self.trig_rates[i] * point[i];
        }
        if ea != 0.0 {
            v *= ea.exp();
        }
        match self.kind {
            TrigKind::One => v,
            TrigKind::Cos => v * tb.cos(),
            TrigKind::Sin => v * tb.sin(),
        }
    }

    /// Product of two terms, as one or two terms.
    fn mul(&self, o: &Term) -> Vec<Term> {
        let powers: Vec<u32> = self.powers.iter().zip(&o.powers).map(|(a, b)| a + b).collect();
        let exp_rates: Vec<f64> = self.exp_rates.iter().zip(&o.exp_rates).map(|(a, b)| a + b).collect();
        let c = self.coeff * o.coeff;
        let sum: Vec<f64> = self.trig_rates.iter().zip(&o.trig_rates).map(|(a, b)| a + b).collect();
        let diff: Vec<f64> = self.trig_rates.iter().zip(&o.trig_rates).map(|(a, b)| a - b).collect();
        let mk = |coeff: f64, trig_rates: Vec<f64>, kind: TrigKind| Term {
            coeff,
            powers: powers.clone(),
            exp_rates: exp_rates.clone(),
            trig_rates,
            kind,
        };
        use TrigKind::*;
        match (self.kind, o.kind) {
            (One, k) => vec![mk(c, o.trig_rates.clone(), k)],
            (k, One) => vec![mk(c, self.trig_rates.clone(), k)],
            // cos A cos B = (cos(A-B) + cos(A+B)) / 2
            (Cos, Cos) => vec![mk(c / 2.0, diff, Cos), mk(c / 2.0, sum, Cos)],
            // sin A sin B = (cos(A-B) - cos(A+B)) / 2
            (Sin, Sin) => vec![mk(c / 2.0, diff, Cos), mk(-c / 2.0, sum, Cos)],
            // sin A cos B = (sin(A+B) + sin(A-B)) / 2
            (Sin, Cos) => vec![mk(c / 2.0, sum, Sin), mk(c / 2.0, diff, Sin)],
            // cos A sin B = (sin(A+B) - sin(A-B)) / 2
            (Cos, Sin) => vec![mk(c / 2.0, sum, Sin), mk(-c / 2.0, diff, Sin)],
        }
    }
}

/// Exponential polynomial over a chart, in canonical form.
#[derive(Clone)]
pub struct ExpPoly {
    chart: VarSet,
    terms: Vec<Term>,
}

impl ExpPoly {
    /// Canonicalize an arbitrary term list.
    pub fn from_terms(chart: &VarSet, terms: Vec<Term>) -> Self {
        let n = chart.len();
        let mut ts: Vec<Term> = terms
            .into_iter()
            .filter(|t| t.coeff != 0.0)
            .map(|t| {
                assert!(t.powers.len() == n && t.exp_rates.len() == n && t.trig_rates.len() == n);
                t
            })
            .filter_map(Term::normalized)
            .collect();
        ts.sort_by(|a, b| a.key_cmp(b));
        let tol = zero_tol();
        let mut out: Vec<Term> = Vec::with_capacity(ts.len());
        for t in ts {
            match out.last_mut() {
                Some(last) if last.same_key(&t) => last.coeff += t.coeff,
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coeff.abs() > tol);
        ExpPoly { chart: chart.clone(), terms: out }
    }

    pub fn zero(chart: &VarSet) -> Self {
        ExpPoly { chart: chart.clone(), terms: Vec::new() }
    }

    pub fn constant(chart: &VarSet, c: f64) -> Self {
        let n = chart.len();
        Self::from_terms(
            chart,
            vec![Term { coeff: c, powers: vec![0; n], exp_rates: vec![0.0; n], trig_rates: vec![0.0; n], kind: TrigKind::One }],
        )
    }

    pub fn one(chart: &VarSet) -> Self {
        Self::constant(chart, 1.0)
    }

    pub fn var(chart: &VarSet, i: usize) -> Self {
        let n = chart.len();
        let mut powers = vec![0; n];
        powers[i] = 1;
        Self::from_terms(
            chart,
            vec![Term { coeff: 1.0, powers, exp_rates: vec![0.0; n], trig_rates: vec![0.0; n], kind: TrigKind::One }],
        )
    }

    /// `exp(rates · x)`
    pub fn exp_linear(chart: &VarSet, rates: &[f64]) -> Self {
        let n = chart.len();
        Self::from_terms(
            chart,
            vec![Term { coeff: 1.0, powers: vec![0; n], exp_rates: rates.to_vec(), trig_rates: vec![0.0; n], kind: TrigKind::One }],
        )
    }

    /// `cos(rates · x)` or `sin(rates · x)`
    pub fn trig_linear(chart: &VarSet, rates: &[f64], kind: TrigKind) -> Self {
        let n = chart.len();
        Self::from_terms(
            chart,
            vec![Term { coeff: 1.0, powers: vec![0; n], exp_rates: vec![0.0; n], trig_rates: rates.to_vec(), kind }],
        )
    }

    pub fn chart(&self) -> &VarSet {
        &self.chart
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_const_term(t: &Term) -> bool {
        t.kind == TrigKind::One && t.powers.iter().all(|&p| p == 0) && rates_zero(&t.exp_rates)
    }

    pub fn constant_value(&self) -> Option<f64> {
        match self.terms.as_slice() {
            [] => Some(0.0),
            [t] if Self::is_const_term(t) => Some(t.coeff),
            _ => None,
        }
    }

    pub fn depends_on(&self, v: usize) -> bool {
        self.terms.iter().any(|t| t.powers[v] > 0 || t.exp_rates[v] != 0.0 || t.trig_rates[v] != 0.0)
    }

    /// Linear coefficients and constant when the value is affine in the chart.
    pub fn as_affine(&self) -> Option<(Vec<f64>, f64)> {
        let n = self.chart.len();
        let mut lin = vec![0.0; n];
        let mut c0 = 0.0;
        for t in &self.terms {
            if t.kind != TrigKind::One || !rates_zero(&t.exp_rates) {
                return None;
            }
            let deg: u32 = t.powers.iter().sum();
            match deg {
                0 => c0 += t.coeff,
                1 => lin[t.powers.iter().position(|&p| p == 1).unwrap()] += t.coeff,
                _ => return None,
            }
        }
        Some((lin, c0))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).fold(0.0, f64::max)
    }

    fn check_chart(&self, o: &Self) {
        assert!(self.chart == o.chart, "chart mismatch: {} vs {}", self.chart, o.chart);
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.chart.check_same(&o.chart)?;
        Ok(self.add(o))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_chart(o);
        let mut ts = self.terms.clone();
        ts.extend(o.terms.iter().cloned());
        Self::from_terms(&self.chart, ts)
    }

    pub fn neg(&self) -> Self {
        ExpPoly { chart: self.chart.clone(), terms: self.terms.iter().map(|t| t.with_coeff(-t.coeff)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_terms(&self.chart, self.terms.iter().map(|t| t.with_coeff(t.coeff * k)).collect())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.chart.check_same(&o.chart)?;
        Ok(self.mul(o))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_chart(o);
        let mut ts = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            for b in &o.terms {
                ts.extend(a.mul(b));
            }
        }
        Self::from_terms(&self.chart, ts)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.chart);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn diff(&self, v: usize) -> Self {
        let mut ts = Vec::new();
        for t in &self.terms {
            if t.powers[v] > 0 {
                let mut d = t.with_coeff(t.coeff * t.powers[v] as f64);
                d.powers[v] -= 1;
                ts.push(d);
            }
            if t.exp_rates[v] != 0.0 {
                ts.push(t.with_coeff(t.coeff * t.exp_rates[v]));
            }
            let b = t.trig_rates[v];
            if b != 0.0 {
                match t.kind {
                    TrigKind::Cos => ts.push(Term { kind: TrigKind::Sin, ..t.with_coeff(-t.coeff * b) }),
                    TrigKind::Sin => ts.push(Term { kind: TrigKind::Cos, ..t.with_coeff(t.coeff * b) }),
                    TrigKind::One => {}
                }
            }
        }
        Self::from_terms(&self.chart, ts)
    }

    pub fn evaluate(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.chart.len(), "point dimension");
        self.terms.iter().map(|t| t.eval(point)).sum()
    }

    /// Antiderivative in `v` (no constant normalization).
    pub fn antideriv_raw(&self, v: usize) -> Self {
        let mut ts = Vec::new();
        for t in &self.terms {
            let k = t.powers[v] as usize;
            let a = t.exp_rates[v];
            let b = if t.kind == TrigKind::One { 0.0 } else { t.trig_rates[v] };
            if b == 0.0 && a == 0.0 {
                let mut d = t.with_coeff(t.coeff / (k as f64 + 1.0));
                d.powers[v] += 1;
                ts.push(d);
                continue;
            }
            // ∫ v^k e^{λv} dv = e^{λv} Σ_j (-1)^j k!/(k-j)! v^{k-j} / λ^{j+1}
            let lambda = Complex64::new(a, b);
            let gamma = match t.kind {
                TrigKind::Sin if b != 0.0 => Complex64::new(0.0, -1.0),
                _ => Complex64::new(1.0, 0.0),
            };
            let mut falling = 1.0;
            let mut lp = lambda;
            for j in 0..=k {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let w = gamma * (sign * falling) / lp;
                let mut base = t.clone();
                base.powers[v] = (k - j) as u32;
                if b == 0.0 {
                    ts.push(base.with_coeff(t.coeff * w.re));
                } else {
                    ts.push(Term { kind: TrigKind::Cos, ..base.with_coeff(t.coeff * w.re) });
                    ts.push(Term { kind: TrigKind::Sin, ..base.with_coeff(-t.coeff * w.im) });
                }
                falling *= (k - j) as f64;
                lp *= lambda;
            }
        }
        Self::from_terms(&self.chart, ts)
    }

    /// Antiderivative in `v` vanishing on the hyperplane `v = base`.
    pub fn antideriv(&self, v: usize, base: f64) -> Self {
        let big = self.antideriv_raw(v);
        let at_base = big.fix_var(v, base);
        big.sub(&at_base)
    }

    /// Substitute a constant for variable `v`.
    pub fn fix_var(&self, v: usize, value: f64) -> Self {
        let bindings: Vec<ExpPoly> = (0..self.chart.len())
            .map(|i| if i == v { Self::constant(&self.chart, value) } else { Self::var(&self.chart, i) })
            .collect();
        self.substitute(&self.chart, &bindings).expect("constant bindings are affine")
    }

    /// Composition with `bindings[i]` replacing variable `i`. Variables that
    /// occur inside exponential or trigonometric rates must be bound to
    /// affine values.
    pub fn substitute(&self, target: &VarSet, bindings: &[ExpPoly]) -> Result<Self> {
        let n = self.chart.len();
        if bindings.len() != n {
            return Err(Error::InvalidArgument("binding count differs from chart".into()));
        }
        for b in bindings {
            target.check_same(&b.chart)?;
        }
        let m = target.len();
        let mut affine: Vec<Option<(Vec<f64>, f64)>> = vec![None; n];
        let mut powers_cache: Vec<Vec<ExpPoly>> = bindings.iter().map(|b| vec![Self::one(target), b.clone()]).collect();
        let mut acc: Vec<Term> = Vec::new();
        for t in &self.terms {
            let mut lin_a = vec![0.0; m];
            let mut lin_b = vec![0.0; m];
            let mut a0 = 0.0;
            let mut b0 = 0.0;
            for i in 0..n {
                let (a, b) = (t.exp_rates[i], t.trig_rates[i]);
                if a == 0.0 && b == 0.0 {
                    continue;
                }
                if affine[i].is_none() {
                    affine[i] = Some(bindings[i].as_affine().ok_or_else(|| {
                        Error::NonAffineExponentSubstitution(format!(
                            "{} -> {} inside an exponential or trigonometric factor",
                            self.chart.name(i),
                            bindings[i].to_text()
                        ))
                    })?);
                }
                let (lin, c0) = affine[i].as_ref().unwrap();
                for j in 0..m {
                    lin_a[j] += a * lin[j];
                    lin_b[j] += b * lin[j];
                }
                a0 += a * c0;
                b0 += b * c0;
            }
            let c = t.coeff * a0.exp();
            let base = Term { coeff: c, powers: vec![0; m], exp_rates: lin_a, trig_rates: lin_b, kind: TrigKind::One };
            let head: Vec<Term> = match t.kind {
                TrigKind::One => vec![base],
                // cos(b0 + B) = cos b0 cos B - sin b0 sin B
                TrigKind::Cos => vec![
                    Term { kind: TrigKind::Cos, ..base.with_coeff(c * b0.cos()) },
                    Term { kind: TrigKind::Sin, ..base.with_coeff(-c * b0.sin()) },
                ],
                // sin(b0 + B) = sin b0 cos B + cos b0 sin B
                TrigKind::Sin => vec![
                    Term { kind: TrigKind::Cos, ..base.with_coeff(c * b0.sin()) },
                    Term { kind: TrigKind::Sin, ..base.with_coeff(c * b0.cos()) },
                ],
            };
            let mut prod = Self::from_terms(target, head);
            for i in 0..n {
                let e = t.powers[i] as usize;
                if e == 0 {
                    continue;
                }
                while powers_cache[i].len() <= e {
                    let next = powers_cache[i].last().unwrap().mul(&bindings[i]);
                    powers_cache[i].push(next);
                }
                prod = prod.mul(&powers_cache[i][e]);
            }
            acc.extend(prod.terms);
        }
        Ok(Self::from_terms(target, acc))
    }

    pub fn embed(&self, target: &VarSet, map: &[usize]) -> Self {
        let m = target.len();
        let ts = self
            .terms
            .iter()
            .map(|t| {
                let mut u = Term {
                    coeff: t.coeff,
                    powers: vec![0; m],
                    exp_rates: vec![0.0; m],
                    trig_rates: vec![0.0; m],
                    kind: t.kind,
                };
                for (i, &j) in map.iter().enumerate() {
                    u.powers[j] += t.powers[i];
                    u.exp_rates[j] += t.exp_rates[i];
                    u.trig_rates[j] += t.trig_rates[i];
                }
                u
            })
            .collect();
        Self::from_terms(target, ts)
    }

    /// Every coefficient of `self - o` is within `tol`.
    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        self.check_chart(o);
        let mut ts = self.terms.clone();
        ts.extend(o.terms.iter().map(|t| t.with_coeff(-t.coeff)));
        ts.sort_by(|a, b| a.key_cmp(b));
        let mut acc: Vec<Term> = Vec::new();
        for t in ts.into_iter().filter_map(Term::normalized) {
            match acc.last_mut() {
                Some(last) if last.same_key(&t) => last.coeff += t.coeff,
                _ => acc.push(t),
            }
        }
        acc.iter().all(|t| t.coeff.abs() <= tol)
    }

    /// Canonical text, parseable back by [`super::expr::parse_exppoly`].
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = self.chart.names();
        let mut out = String::new();
        for (idx, t) in self.terms.iter().enumerate() {
            let neg = t.coeff < 0.0;
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            let mono = super::poly::fmt_monomial(&t.powers, names);
            if !mono.is_empty() {
                factors.push(mono);
            }
            if !rates_zero(&t.exp_rates) {
                factors.push(format!("exp({})", fmt_linear(&t.exp_rates, names)));
            }
            match t.kind {
                TrigKind::One => {}
                TrigKind::Cos => factors.push(format!("cos({})", fmt_linear(&t.trig_rates, names))),
                TrigKind::Sin => factors.push(format!("sin({})", fmt_linear(&t.trig_rates, names))),
            }
            let a = t.coeff.abs();
            if factors.is_empty() {
                out.push_str(&fmt_f64(a));
            } else {
                if a != 1.0 {
                    out.push_str(&fmt_f64(a));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn fmt_linear(rates: &[f64], names: &[String]) -> String {
    let mut out = String::new();
    for (i, &r) in rates.iter().enumerate() {
        if r == 0.0 {
            continue;
        }
        let neg = r < 0.0;
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = r.abs();
        if a != 1.0 {
            out.push_str(&fmt_f64(a));
            out.push('*');
        }
        out.push_str(&names[i]);
    }
    out
}

impl PartialEq for ExpPoly {
    fn eq(&self, o: &Self) -> bool {
        self.chart == o.chart && self.sub(o).is_zero()
    }
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> VarSet {
        VarSet::new(&["x", "y", "t"]).unwrap()
    }

    fn p(s: &str) -> ExpPoly {
        super::super::expr::parse_exppoly(s, &chart()).unwrap()
    }

    #[test]
    fn exponents_cancel() {
        assert_eq!(p("x*exp(2*y)").mul(&p("x*exp(-2*y)")), p("x^2"));
    }

    #[test]
    fn pythagorean_identity() {
        let c = p("cos(t)");
        let s = p("sin(t)");
        let one = c.mul(&c).add(&s.mul(&s));
        assert_eq!(one.to_text(), "1");
    }

    #[test]
    fn sign_canonical_trig() {
        assert_eq!(p("sin(-t)"), p("-sin(t)"));
        assert_eq!(p("cos(-t)"), p("cos(t)"));
        assert!(p("sin(0*t)").is_zero());
    }

    #[test]
    fn product_rule() {
        let f = p("x*exp(3*x)");
        assert_eq!(f.diff(0), p("exp(3*x) + 3*x*exp(3*x)"));
        assert!(p("1").diff(0).is_zero());
    }

    #[test]
    fn damped_cosine_antiderivative() {
        let (a, b) = (0.5, 2.0);
        let f = ExpPoly::exp_linear(&chart(), &[0.0, 0.0, a]).mul(&ExpPoly::trig_linear(&chart(), &[0.0, 0.0, b], TrigKind::Cos));
        let big = f.antideriv_raw(2);
        let expect = p("0.5*exp(0.5*t)*cos(2*t) + 2*exp(0.5*t)*sin(2*t)").scale(1.0 / (a * a + b * b));
        assert!(big.approx_eq(&expect, 1e-12), "{big}");
        assert!(big.diff(2).approx_eq(&f, 1e-12));
    }

    #[test]
    fn antiderivative_normalized_at_base() {
        let f = p("x^2*y*exp(y)*sin(x + y)");
        let g = f.antideriv(0, 0.7);
        assert!(g.diff(0).approx_eq(&f, 1e-10));
        assert!(g.evaluate(&[0.7, 1.3, 0.0]).abs() < 1e-12);
        let h = p("exp(y)*sin(x)");
        assert!(h.antideriv(1, 0.0).diff(1).approx_eq(&h, 1e-12));
    }

    #[test]
    fn substitution_cases() {
        let c = chart();
        let z = VarSet::new(&["z"]).unwrap();
        let e = ExpPoly::exp_linear(&z, &[1.5]);
        let r = e.substitute(&c, &[p("x + y")]).unwrap();
        assert_eq!(r, p("exp(1.5*x + 1.5*y)"));
        assert_eq!(r.terms().len(), 1);
        let sq = ExpPoly::var(&z, 0).pow(2).substitute(&c, &[p("x*exp(y)")]).unwrap();
        assert_eq!(sq, p("x^2*exp(2*y)"));
        let bad = ExpPoly::exp_linear(&z, &[1.0]).substitute(&c, &[p("exp(x)")]);
        assert!(matches!(bad, Err(Error::NonAffineExponentSubstitution(_))));
    }

    #[test]
    fn phase_shift_expands() {
        let f = p("cos(x)").fix_var(0, 1.0);
        assert!((f.constant_value().unwrap() - 1f64.cos()).abs() < 1e-15);
        let g = p("sin(x + t)").fix_var(0, 0.3);
        let v = g.evaluate(&[9.0, 0.0, 0.4]);
        assert!((v - 0.7f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn text_round_trip() {
        let f = p("-2*x^2*exp(-y - 0.5*t)*cos(3*t) + 0.25*sin(x) - 7");
        let g = p(&f.to_text());
        assert_eq!(f.to_text(), g.to_text());
    }
}

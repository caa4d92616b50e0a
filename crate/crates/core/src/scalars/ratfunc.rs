use std::fmt;

use num::Zero;

use super::poly::{gcd, Poly};
use super::{Rational, VarSet};
use crate::error::{Error, Result};

/// Reduced quotient of polynomials over ℚ. The denominator is monic in lex
/// order and coprime to the numerator; zero is `0/1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    chart: VarSet,
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(chart: &VarSet, num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        if num.nvars() != chart.len() || den.nvars() != chart.len() {
            return Err(Error::ChartMismatch("polynomial arity differs from chart".into()));
        }
        Ok(Self::normalized(chart.clone(), num, den))
    }

    pub fn from_poly(chart: &VarSet, p: Poly) -> Self {
        let n = chart.len();
        RationalFunction { chart: chart.clone(), num: p, den: Poly::one(n) }
    }

    fn normalized(chart: VarSet, num: Poly, den: Poly) -> Self {
        let n = chart.len();
        if num.is_zero() {
            return RationalFunction { chart, num, den: Poly::one(n) };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let l = den.leading_coeff();
        let inv = l.recip();
        RationalFunction { chart, num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero(chart: &VarSet) -> Self {
        Self::from_poly(chart, Poly::zero(chart.len()))
    }

    pub fn one(chart: &VarSet) -> Self {
        Self::from_poly(chart, Poly::one(chart.len()))
    }

    pub fn constant(chart: &VarSet, c: Rational) -> Self {
        Self::from_poly(chart, Poly::constant(chart.len(), c))
    }

    pub fn var(chart: &VarSet, i: usize) -> Self {
        Self::from_poly(chart, Poly::var(chart.len(), i))
    }

    pub fn chart(&self) -> &VarSet {
        &self.chart
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn depends_on(&self, v: usize) -> bool {
        self.num.depends_on(v) || self.den.depends_on(v)
    }

    fn check(&self, o: &Self) -> Result<()> {
        self.chart.check_same(&o.chart)
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.add_unchecked(o))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn add_unchecked(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::normalized(self.chart.clone(), self.num.add(&o.num), self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        let a = self.den.div_exact(&g).unwrap();
        let b = o.den.div_exact(&g).unwrap();
        let num = self.num.mul(&b).add(&o.num.mul(&a));
        let den = a.mul(&o.den);
        if num.is_zero() {
            return Self::zero(&self.chart);
        }
        // with both inputs reduced, only factors of g can cancel
        let h = gcd(&num, &g);
        let (num, den) = if h.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&h).expect("gcd divides"), den.div_exact(&h).expect("gcd divides"))
        };
        let inv = den.leading_coeff().recip();
        RationalFunction { chart: self.chart.clone(), num: num.scale(&inv), den: den.scale(&inv) }
    }

    fn mul_unchecked(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.chart);
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let l = den.leading_coeff().recip();
        RationalFunction { chart: self.chart.clone(), num: num.scale(&l), den: den.scale(&l) }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("chart mismatch")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("chart mismatch")
    }

    pub fn neg(&self) -> Self {
        RationalFunction { chart: self.chart.clone(), num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.chart);
        }
        RationalFunction { chart: self.chart.clone(), num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(Self::normalized(self.chart.clone(), self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.mul_unchecked(&o.recip()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e >= 0 {
            Ok(RationalFunction { chart: self.chart.clone(), num: self.num.pow(e as u32), den: self.den.pow(e as u32) })
        } else {
            self.recip()?.pow(-e)
        }
    }

    /// Exact partial derivative (quotient rule, then reduced).
    pub fn diff(&self, v: usize) -> Self {
        let dn = self.num.diff(v);
        if self.den.is_constant() {
            return RationalFunction { chart: self.chart.clone(), num: dn, den: self.den.clone() };
        }
        if !self.den.depends_on(v) {
            return Self::normalized(self.chart.clone(), dn, self.den.clone());
        }
        // den = free * dep with every factor of dep involving v. For
        // g = gcd(dep, dep') the denominator dep^2/g is exact; only factors
        // of `free` can still cancel.
        let free = self.den.content_in(v);
        let dep = self.den.div_exact(&free).expect("content divides");
        let ddep = dep.diff(v);
        let g = gcd(&dep, &ddep);
        let dep_g = dep.div_exact(&g).expect("gcd divides");
        let ddep_g = ddep.div_exact(&g).expect("gcd divides");
        let num = dn.mul(&dep_g).sub(&self.num.mul(&ddep_g));
        if num.is_zero() {
            return Self::zero(&self.chart);
        }
        let mut den = self.den.mul(&dep_g);
        let mut num = num;
        if !free.is_constant() {
            let h = gcd(&num, &free);
            if !h.is_constant() {
                num = num.div_exact(&h).expect("gcd divides");
                den = den.div_exact(&h).expect("gcd divides");
            }
        }
        let inv = den.leading_coeff().recip();
        RationalFunction { chart: self.chart.clone(), num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        let d = self.den.eval_f64(point);
        if d == 0.0 {
            return Err(Error::PoleAtPoint);
        }
        Ok(self.num.eval_f64(point) / d)
    }

    pub fn evaluate_exact(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval_rational(point);
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(self.num.eval_rational(point) / d)
    }

    /// Substitute a rational value for variable `v`; fails if the
    /// denominator vanishes identically after substitution.
    pub fn fix_var(&self, v: usize, value: &Rational) -> Result<Self> {
        let den = self.den.fix_var(v, value);
        if den.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(Self::normalized(self.chart.clone(), self.num.fix_var(v, value), den))
    }

    /// Composition `self(bindings)`, with `bindings[i]` replacing variable `i`.
    pub fn compose(&self, target: &VarSet, bindings: &[RationalFunction]) -> Result<Self> {
        if bindings.len() != self.chart.len() {
            return Err(Error::InvalidArgument("binding count differs from chart".into()));
        }
        for b in bindings {
            target.check_same(&b.chart)?;
        }
        let num = compose_poly(&self.num, target, bindings)?;
        let den = compose_poly(&self.den, target, bindings)?;
        num.div(&den)
    }

    pub fn embed(&self, target: &VarSet, map: &[usize]) -> Self {
        let n = target.len();
        Self::normalized(target.clone(), self.num.embed(n, map), self.den.embed(n, map))
    }

    pub fn to_text(&self) -> String {
        let names = self.chart.names();
        if self.den.is_one() {
            return self.num.fmt_with(names);
        }
        format!("({})/({})", self.num.fmt_with(names), self.den.fmt_with(names))
    }
}

fn compose_poly(p: &Poly, target: &VarSet, bindings: &[RationalFunction]) -> Result<RationalFunction> {
    let mut acc = RationalFunction::zero(target);
    // cache powers per variable
    let mut powers: Vec<Vec<RationalFunction>> = bindings.iter().map(|b| vec![RationalFunction::one(target), b.clone()]).collect();
    for (m, c) in p.terms() {
        let mut t = RationalFunction::constant(target, c.clone());
        for (i, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[i].len() <= e as usize {
                let next = powers[i].last().unwrap().mul(&bindings[i]);
                powers[i].push(next);
            }
            t = t.mul(&powers[i][e as usize]);
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

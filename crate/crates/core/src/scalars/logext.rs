use std::fmt;

use num::{One, Signed, Zero};

use super::poly::{fmt_rational, Poly};
use super::ratfunc::RationalFunction;
use super::{Rational, VarSet};
use crate::error::{Error, Result};

/// A rational function plus finitely many `c * ln|p|` terms with rational
/// constants `c`. This is the closure of rational functions under the
/// quadratures supported by [`super::ratint`].
///
/// Non-constant arguments are integer-primitive with positive leading
/// coefficient and pairwise distinct; constant arguments are positive
/// rationals other than one.
#[derive(Clone, PartialEq, Eq)]
pub struct LogExtendedScalar {
    rational: RationalFunction,
    logs: Vec<(Rational, Poly)>,
}

impl LogExtendedScalar {
    pub fn from_rational(r: RationalFunction) -> Self {
        LogExtendedScalar { rational: r, logs: Vec::new() }
    }

    pub fn zero(chart: &VarSet) -> Self {
        Self::from_rational(RationalFunction::zero(chart))
    }

    pub fn new(rational: RationalFunction, logs: Vec<(Rational, Poly)>) -> Self {
        let mut out = LogExtendedScalar { rational, logs: Vec::new() };
        for (c, p) in logs {
            out.push_log(c, p);
        }
        out.canonicalize();
        out
    }

    fn push_log(&mut self, c: Rational, p: Poly) {
        if c.is_zero() {
            return;
        }
        assert!(!p.is_zero(), "log of zero");
        if let Some(k) = p.constant_value() {
            let k = k.abs();
            if !k.is_one() {
                let arg = Poly::constant(p.nvars(), k);
                self.logs.push((c, arg));
            }
            return;
        }
        let prim = p.primitive_integer();
        // p = k * prim  =>  ln|p| = ln|prim| + ln|k|
        let k = p.leading_coeff() / prim.leading_coeff();
        self.logs.push((c.clone(), prim));
        let k = k.abs();
        if !k.is_one() {
            self.logs.push((c, Poly::constant(p.nvars(), k)));
        }
    }

    fn canonicalize(&mut self) {
        self.logs.sort_by(|a, b| a.1.cmp(&b.1));
        let mut merged: Vec<(Rational, Poly)> = Vec::new();
        for (c, p) in self.logs.drain(..) {
            match merged.last_mut() {
                Some((c0, p0)) if *p0 == p => *c0 += c,
                _ => merged.push((c, p)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        self.logs = merged;
    }

    pub fn chart(&self) -> &VarSet {
        self.rational.chart()
    }

    pub fn rational_part(&self) -> &RationalFunction {
        &self.rational
    }

    pub fn log_terms(&self) -> &[(Rational, Poly)] {
        &self.logs
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.logs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut logs = self.logs.clone();
        logs.extend(o.logs.iter().cloned());
        let mut out = LogExtendedScalar { rational: self.rational.add(&o.rational), logs };
        out.canonicalize();
        out
    }

    pub fn neg(&self) -> Self {
        LogExtendedScalar {
            rational: self.rational.neg(),
            logs: self.logs.iter().map(|(c, p)| (-c.clone(), p.clone())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.chart());
        }
        LogExtendedScalar {
            rational: self.rational.scale(k),
            logs: self.logs.iter().map(|(c, p)| (c * k, p.clone())).collect(),
        }
    }

    /// The derivative is always a rational function.
    pub fn diff(&self, v: usize) -> RationalFunction {
        let chart = self.chart().clone();
        let mut acc = self.rational.diff(v);
        for (c, p) in &self.logs {
            if !p.depends_on(v) {
                continue;
            }
            let t = RationalFunction::new(&chart, p.diff(v).scale(c), p.clone()).expect("nonzero log argument");
            acc = acc.add(&t);
        }
        acc
    }

    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        let mut acc = self.rational.evaluate(point)?;
        for (c, p) in &self.logs {
            let v = p.eval_f64(point);
            if v == 0.0 {
                return Err(Error::PoleAtPoint);
            }
            acc += super::rat_to_f64(c) * v.abs().ln();
        }
        Ok(acc)
    }

    pub fn to_rational(&self) -> Option<RationalFunction> {
        if self.logs.is_empty() {
            Some(self.rational.clone())
        } else {
            None
        }
    }

    /// Substitute a rational value for variable `v`.
    pub fn fix_var(&self, v: usize, value: &Rational) -> Result<Self> {
        let rational = self.rational.fix_var(v, value)?;
        let mut logs = Vec::with_capacity(self.logs.len());
        for (c, p) in &self.logs {
            let q = p.fix_var(v, value);
            if q.is_zero() {
                return Err(Error::PoleAtPoint);
            }
            logs.push((c.clone(), q));
        }
        Ok(Self::new(rational, logs))
    }

    pub fn embed(&self, target: &VarSet, map: &[usize]) -> Self {
        Self::new(
            self.rational.embed(target, map),
            self.logs.iter().map(|(c, p)| (c.clone(), p.embed(target.len(), map))).collect(),
        )
    }

    pub fn to_text(&self) -> String {
        let names = self.chart().names();
        let mut out = String::new();
        if !self.rational.is_zero() || self.logs.is_empty() {
            out.push_str(&self.rational.to_text());
        }
        for (c, p) in &self.logs {
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            if !a.is_one() {
                out.push_str(&fmt_rational(&a));
                out.push('*');
            }
            out.push_str(&format!("log({})", p.fmt_with(names)));
        }
        out
    }
}

impl fmt::Debug for LogExtendedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for LogExtendedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

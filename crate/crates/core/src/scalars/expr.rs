//! Infix expression parser shared by the JSON loaders and the canonical text
//! round-trip.
//!
//! Grammar: sums and differences of products and quotients of powers of
//! atoms; atoms are numbers (integers, fractions via `/`, decimals,
//! scientific notation), chart variables, parameters, parenthesized
//! expressions and the functions `exp`, `cos`, `sin`.

use std::collections::BTreeMap;

use num::BigInt;

use super::{ExpPoly, Poly, Rational, RationalFunction, TrigKind, VarSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num { value: Rational, literal: String },
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(String, Box<Expr>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at offset {} in `{}`", self.pos, self.src)))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.eat('(') {
            let neg = self.eat('-');
            let n = self.integer()?;
            if !self.eat(')') {
                return self.err("expected `)` after exponent");
            }
            return Ok(if neg { -n } else { n });
        }
        let neg = self.eat('-');
        let n = self.integer()?;
        Ok(if neg { -n } else { n })
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        match self.src[start..self.pos].parse() {
            Ok(n) => Ok(n),
            Err(_) => self.err("expected integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_alphanumeric() || c == '_') {
                    self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
                }
                let name = self.src[start..self.pos].to_string();
                if self.peek() == Some('(') {
                    self.pos += 1;
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return self.err("expected `)` after function argument");
                    }
                    return Ok(Expr::Call(name, Box::new(arg)));
                }
                Ok(Expr::Var(name))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let s = &self.src[self.pos..];
        let b = s.as_bytes();
        let mut i = 0;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i < b.len() && b[i] == b'.' {
            i += 1;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
        }
        // exponent only when followed by digits, so `2e` stays `2 * e`
        if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
            let mut j = i + 1;
            if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                j += 1;
            }
            if j < b.len() && b[j].is_ascii_digit() {
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let literal = s[..i].to_string();
        self.pos += i;
        let value = parse_decimal(&literal).ok_or_else(|| Error::Parse(format!("bad number `{literal}`")))?;
        Ok(Expr::Num { value, literal })
    }
}

/// Exact value of a decimal literal such as `12`, `0.25` or `1.5e-3`.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = match mant.find('.') {
        Some(k) => (&mant[..k], &mant[k + 1..]),
        None => (mant, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        Rational::from_integer(n * num::pow(ten, scale as usize))
    } else {
        Rational::new(n, num::pow(ten, (-scale) as usize))
    })
}

/// Parse a rational literal: `p/q`, integer, or decimal.
pub fn parse_rational_literal(s: &str) -> Result<Rational> {
    let e = parse(s)?;
    let v = eval_rf(&e, &VarSet::new::<&str>(&[])?, &BTreeMap::new())?;
    v.constant_value().ok_or_else(|| Error::Parse(format!("`{s}` is not a number")))
}

pub fn parse(s: &str) -> Result<Expr> {
    let mut p = Parser { src: s, pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parse into a rational function over `chart`.
pub fn parse_rational(s: &str, chart: &VarSet) -> Result<RationalFunction> {
    eval_rf(&parse(s)?, chart, &BTreeMap::new())
}

/// Parse with named rational parameters substituted.
pub fn parse_rational_with(s: &str, chart: &VarSet, params: &BTreeMap<String, Rational>) -> Result<RationalFunction> {
    eval_rf(&parse(s)?, chart, params)
}

/// Parse a polynomial (a rational function with trivial denominator).
pub fn parse_poly(s: &str, chart: &VarSet) -> Result<Poly> {
    let r = parse_rational(s, chart)?;
    if !r.is_polynomial() {
        return Err(Error::Parse(format!("`{s}` is not a polynomial")));
    }
    Ok(r.numer().clone())
}

pub fn parse_exppoly(s: &str, chart: &VarSet) -> Result<ExpPoly> {
    eval_exp(&parse(s)?, chart)
}

fn eval_rf(e: &Expr, chart: &VarSet, params: &BTreeMap<String, Rational>) -> Result<RationalFunction> {
    let rec = |x: &Expr| eval_rf(x, chart, params);
    Ok(match e {
        Expr::Num { value, .. } => RationalFunction::constant(chart, value.clone()),
        Expr::Var(name) => match chart.index_of(name) {
            Some(i) => RationalFunction::var(chart, i),
            None => match params.get(name) {
                Some(v) => RationalFunction::constant(chart, v.clone()),
                None => return Err(Error::UnknownVariable(name.clone())),
            },
        },
        Expr::Neg(a) => rec(a)?.neg(),
        Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
        Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?),
        Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?),
        Expr::Div(a, b) => {
            let d = rec(b)?;
            if d.is_zero() {
                return Err(Error::Parse("division by zero".into()));
            }
            rec(a)?.div(&d)?
        }
        Expr::Pow(a, k) => {
            let base = rec(a)?;
            if *k < 0 && base.is_zero() {
                return Err(Error::Parse("negative power of zero".into()));
            }
            base.pow(*k as i32)?
        }
        Expr::Call(f, a) => {
            let arg = rec(a)?;
            match (f.as_str(), arg.is_zero()) {
                ("exp" | "cos", true) => RationalFunction::one(chart),
                ("sin", true) => RationalFunction::zero(chart),
                _ => {
                    return Err(Error::Parse(format!(
                        "function `{f}` is not available for rational coefficients"
                    )))
                }
            }
        }
    })
}

fn eval_exp(e: &Expr, chart: &VarSet) -> Result<ExpPoly> {
    let rec = |x: &Expr| eval_exp(x, chart);
    Ok(match e {
        Expr::Num { value, literal } => {
            let v = literal.parse::<f64>().unwrap_or_else(|_| super::rat_to_f64(value));
            ExpPoly::constant(chart, v)
        }
        Expr::Var(name) => ExpPoly::var(chart, chart.require(name)?),
        Expr::Neg(a) => rec(a)?.neg(),
        Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
        Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?),
        Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?),
        Expr::Div(a, b) => {
            let d = rec(b)?;
            match d.constant_value() {
                Some(c) if c != 0.0 => rec(a)?.scale(1.0 / c),
                _ => {
                    // division by a pure exponential is multiplication by its inverse
                    let inv = invert_exponential(&d)
                        .ok_or_else(|| Error::Parse("division by a non-constant exponential polynomial".into()))?;
                    rec(a)?.mul(&inv)
                }
            }
        }
        Expr::Pow(a, k) => {
            let base = rec(a)?;
            if *k >= 0 {
                base.pow(*k as u32)
            } else {
                let inv = invert_exponential(&base)
                    .ok_or_else(|| Error::Parse("negative power of a non-exponential".into()))?;
                inv.pow((-*k) as u32)
            }
        }
        Expr::Call(f, a) => {
            let arg = rec(a)?;
            let (lin, c0) = arg
                .as_affine()
                .ok_or_else(|| Error::NonAffineExponentSubstitution(format!("{f}({})", arg.to_text())))?;
            match f.as_str() {
                "exp" => ExpPoly::exp_linear(chart, &lin).scale(c0.exp()),
                "cos" => {
                    let c = ExpPoly::trig_linear(chart, &lin, TrigKind::Cos);
                    let s = ExpPoly::trig_linear(chart, &lin, TrigKind::Sin);
                    c.scale(c0.cos()).sub(&s.scale(c0.sin()))
                }
                "sin" => {
                    let c = ExpPoly::trig_linear(chart, &lin, TrigKind::Cos);
                    let s = ExpPoly::trig_linear(chart, &lin, TrigKind::Sin);
                    s.scale(c0.cos()).add(&c.scale(c0.sin()))
                }
                _ => return Err(Error::Parse(format!("unknown function `{f}`"))),
            }
        }
    })
}

/// `1/d` when `d` is a single term `c * exp(a·x)`.
fn invert_exponential(d: &ExpPoly) -> Option<ExpPoly> {
    match d.terms() {
        [t] if t.kind == TrigKind::One && t.powers.iter().all(|&p| p == 0) => {
            let rates: Vec<f64> = t.exp_rates.iter().map(|r| -r).collect();
            Some(ExpPoly::exp_linear(d.chart(), &rates).scale(1.0 / t.coeff))
        }
        _ => None,
    }
}

/// Parse `name=value,name=value` assignments with rational values.
pub fn parse_assignments(s: &str) -> Result<Vec<(String, Rational)>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected name=value, got `{part}`")))?;
        out.push((k.trim().to_string(), parse_rational_literal(v.trim())?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch() -> VarSet {
        VarSet::new(&["x", "u", "ux", "uxx"]).unwrap()
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_decimal("0.25").unwrap(), Rational::new(1.into(), 4.into()));
        assert_eq!(parse_decimal("1.5e-3").unwrap(), Rational::new(3.into(), 2000.into()));
        assert_eq!(parse_decimal("12").unwrap(), Rational::from_integer(12.into()));
    }

    #[test]
    fn rational_sum_over_common_denominator() {
        let c = ch();
        let s = parse_rational("ux^3/uxx + 1/ux", &c).unwrap();
        let t = parse_rational("(ux^4 + uxx)/(ux*uxx)", &c).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn evaluation_example() {
        let c = ch();
        let f = parse_rational("ux^6/uxx^3", &c).unwrap();
        assert_eq!(f.evaluate(&[0.0, 0.0, 2.0, 1.0]).unwrap(), 64.0);
    }

    #[test]
    fn canonical_rational_text_round_trips() {
        let c = ch();
        let f = parse_rational("(3*u*uxx^2 - x*ux)/(2*ux^5 + uxx)", &c).unwrap();
        assert_eq!(parse_rational(&f.to_text(), &c).unwrap(), f);
    }

    #[test]
    fn parameters_and_errors() {
        let c = ch();
        let mut p = BTreeMap::new();
        p.insert("a".to_string(), Rational::from_integer(2.into()));
        let f = parse_rational_with("a*x", &c, &p).unwrap();
        assert_eq!(f, parse_rational("2*x", &c).unwrap());
        assert!(matches!(parse_rational("b*x", &c), Err(Error::UnknownVariable(_))));
        assert!(matches!(parse_rational("exp(x)", &c), Err(Error::Parse(_))));
        assert!(parse("x +").is_err());
    }

    #[test]
    fn assignments() {
        let a = parse_assignments("x=0, u=0,ux=1,uxx=1/2").unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a[3].1, Rational::new(1.into(), 2.into()));
    }
}

//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Monomials are exponent vectors ordered lexicographically (first variable
//! most significant). The greatest common divisor is computed recursively:
//! content with respect to a main variable, then a primitive pseudo-remainder
//! sequence on the primitive parts.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};

use super::qpoly::QPoly;
use super::{rat_to_f64, Rational};

pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::monomial(m, Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let nvars = m.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            debug_assert_eq!(m.len(), nvars);
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms.values().next().unwrap().clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map_or(false, |c| c.is_one())
    }

    /// Leading term in lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m[v]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m[v] > 0)
    }

    /// Coefficient of `v^d`, as a polynomial with `v` absent.
    pub fn coeff_in(&self, v: usize, d: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[v] == d {
                let mut m2 = m.clone();
                m2[v] = 0;
                out.terms.insert(m2, c.clone());
            }
        }
        out
    }

    /// Coefficients of `v^0 .. v^deg`.
    pub fn as_univariate(&self, v: usize) -> Vec<Poly> {
        let d = self.degree_in(v);
        let mut out = vec![Poly::zero(self.nvars); d as usize + 1];
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = m2[v] as usize;
            m2[v] = 0;
            out[e].terms.insert(m2, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if self.is_zero() || o.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn diff(&self, v: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[v] > 0 {
                let mut m2 = m.clone();
                m2[v] -= 1;
                out.add_term(m2, c * Rational::from_integer(BigInt::from(m[v])));
            }
        }
        out
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mono: f64 = m.iter().zip(point).map(|(&e, &x)| x.powi(e as i32)).product();
                rat_to_f64(c) * mono
            })
            .sum()
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (&e, x) in m.iter().zip(point) {
                if e > 0 {
                    t *= num::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute a rational value for one variable.
    pub fn fix_var(&self, v: usize, value: &Rational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = m2[v];
            m2[v] = 0;
            out.add_term(m2, c * num::pow(value.clone(), e as usize));
        }
        out
    }

    /// Re-index into a chart with `nvars` variables; variable `i` goes to `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut m2 = vec![0; nvars];
            for (i, &e) in m.iter().enumerate() {
                m2[map[i]] += e;
            }
            out.add_term(m2, c.clone());
        }
        out
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if (0..self.nvars).any(|v| d.degree_in(v) > self.degree_in(v)) {
            return None;
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((rm, rc)) = rem.terms.pop_last() {
            if rm.iter().zip(&dm).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Monomial = rm.iter().zip(&dm).map(|(a, b)| a - b).collect();
            let qc = rc / &dc;
            // the leading product cancels `rm`, which is already removed
            for (m, c) in d.terms.iter().rev().skip(1) {
                let prod: Monomial = m.iter().zip(&qm).map(|(a, b)| a + b).collect();
                rem.add_term(prod, -(&qc * c));
            }
            q.terms.insert(qm, qc);
        }
        Some(q)
    }

    /// Rational content: positive number `c` such that `self / c` has coprime
    /// integer coefficients.
    pub fn rational_content(&self) -> Rational {
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = num::integer::gcd(g, c.numer().clone());
            l = num::integer::lcm(l, c.denom().clone());
        }
        if g.is_zero() {
            Rational::one()
        } else {
            Rational::new(g, l)
        }
    }

    /// Integer-primitive part with positive leading coefficient.
    pub fn primitive_integer(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.rational_content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Scaled so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().recip())
    }

    /// `lc(q)^(deg p - deg q + 1) * self` reduced modulo `q` in variable `v`.
    fn pseudo_rem(&self, q: &Poly, v: usize) -> Poly {
        let dq = q.degree_in(v);
        if dq == 0 {
            // q is free of v: remainder is zero
            return Poly::zero(self.nvars);
        }
        let lq = q.coeff_in(v, dq);
        let dp = self.degree_in(v);
        let mut r = self.clone();
        let mut steps = 0;
        while !r.is_zero() && r.degree_in(v) >= dq {
            let dr = r.degree_in(v);
            let lr = r.coeff_in(v, dr);
            let mut shift = vec![0; self.nvars];
            shift[v] = dr - dq;
            r = lq.mul(&r).sub(&lr.mul(&q.mul_monomial(&shift)));
            steps += 1;
        }
        if dp >= dq && steps < dp - dq + 1 {
            r = r.mul(&lq.pow(dp - dq + 1 - steps));
        }
        r
    }

    /// Coefficients of `self` as a polynomial in the variables `vars`.
    pub fn coeffs_in(&self, vars: &[usize]) -> Vec<Poly> {
        let mut groups: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u32> = vars.iter().map(|&v| m[v]).collect();
            let mut rest = m.clone();
            for &v in vars {
                rest[v] = 0;
            }
            groups.entry(key).or_insert_with(|| Poly::zero(self.nvars)).add_term(rest, c.clone());
        }
        groups.into_values().collect()
    }

    /// gcd of the coefficients of `self` viewed as a polynomial in `v`.
    pub fn content_in(&self, v: usize) -> Poly {
        let mut parts: Vec<Poly> = self.as_univariate(v).into_iter().filter(|c| !c.is_zero()).collect();
        parts.sort_by_key(|p| p.num_terms());
        match parts.split_first() {
            Some((first, rest)) => gcd_with_parts(first, rest.to_vec()),
            None => Poly::zero(self.nvars),
        }
    }

    pub fn primitive_in(&self, v: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    /// Linear coefficients and constant term when the total degree is at most one.
    pub fn as_affine(&self) -> Option<(Vec<Rational>, Rational)> {
        let mut lin = vec![Rational::zero(); self.nvars];
        let mut c0 = Rational::zero();
        for (m, c) in &self.terms {
            let deg: u32 = m.iter().sum();
            match deg {
                0 => c0 = c.clone(),
                1 => {
                    let i = m.iter().position(|&e| e == 1).unwrap();
                    lin[i] = c.clone();
                }
                _ => return None,
            }
        }
        Some((lin, c0))
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = fmt_monomial(m, names);
            if mono.is_empty() {
                out.push_str(&fmt_rational(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&fmt_rational(&a));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn fmt_monomial(m: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
        .collect();
    parts.join("*")
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        write!(f, "Poly({})", self.fmt_with(&names))
    }
}

/// Greatest common divisor, normalized monic in lex order (zero if both are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.nvars);
    }
    let n = a.nvars;
    let only_a: Vec<usize> = (0..n).filter(|&v| a.depends_on(v) && !b.depends_on(v)).collect();
    if !only_a.is_empty() {
        return gcd_with_parts(b, a.coeffs_in(&only_a));
    }
    let only_b: Vec<usize> = (0..n).filter(|&v| b.depends_on(v) && !a.depends_on(v)).collect();
    if !only_b.is_empty() {
        return gcd_with_parts(a, b.coeffs_in(&only_b));
    }
    let common: Vec<usize> = (0..n).filter(|&v| a.depends_on(v)).collect();
    if common.len() > 1 {
        for &v in &common {
            if images_coprime(a, b, v) {
                // the gcd is free of v, so it divides every coefficient in v
                let mut parts = a.coeffs_in(&[v]);
                parts.extend(b.coeffs_in(&[v]));
                parts.sort_by_key(|p| p.num_terms());
                let first = parts.remove(0);
                return gcd_with_parts(&first, parts);
            }
        }
    }
    if common.len() > 1 {
        if let Some(g) = heuristic_gcd(&a.primitive_integer(), &b.primitive_integer()) {
            return g.monic();
        }
    }
    let v = common.iter().copied().min_by_key(|&v| a.degree_in(v).max(b.degree_in(v))).unwrap();
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let (mut p, mut q) = if pa.degree_in(v) >= pb.degree_in(v) { (pa, pb) } else { (pb, pa) };
    // subresultant remainder sequence
    let mut g = Poly::one(n);
    let mut h = Poly::one(n);
    loop {
        let delta = p.degree_in(v) - q.degree_in(v);
        let r = p.pseudo_rem(&q, v);
        if r.is_zero() {
            break;
        }
        if !r.depends_on(v) {
            return c.monic();
        }
        let divisor = g.mul(&h.pow(delta));
        p = q;
        q = r.div_exact(&divisor).expect("subresultant division is exact");
        g = p.coeff_in(v, p.degree_in(v));
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant division is exact")
        };
    }
    c.mul(&q.primitive_in(v)).monic()
}

/// Whether `a` and `b`, with every variable but `v` set to small integers
/// that keep the leading coefficient of `a` in `v` nonzero, have coprime
/// images. If so, `gcd(a, b)` does not depend on `v`.
fn images_coprime(a: &Poly, b: &Poly, v: usize) -> bool {
    let n = a.nvars;
    let (ca, cb) = (a.as_univariate(v), b.as_univariate(v));
    let lc = ca.last().expect("nonzero");
    for attempt in 0..3u64 {
        let point: Vec<Rational> =
            (0..n).map(|w| Rational::from_integer(BigInt::from(2 + (7 * w as u64 + 5 * attempt) % 13))).collect();
        if lc.eval_rational(&point).is_zero() {
            continue;
        }
        let image = |cs: &[Poly]| QPoly::new(cs.iter().map(|c| c.eval_rational(&point)).collect());
        let (ia, ib) = (image(&ca), image(&cb));
        if ib.is_zero() {
            continue;
        }
        return ia.gcd(&ib).degree() == 0;
    }
    false
}

fn int_content(p: &Poly) -> BigInt {
    p.terms.values().fold(BigInt::zero(), |g, c| num::integer::gcd(g, c.numer().clone()))
}

fn max_abs_int(p: &Poly) -> BigInt {
    p.terms.values().map(|c| c.numer().abs()).max().unwrap_or_else(BigInt::zero)
}

/// Symmetric residue in `(-m/2, m/2]`.
fn smod(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Heuristic gcd of integer polynomials: evaluate one variable at a large
/// integer, recurse, rebuild from the base-ξ digits and keep the candidate
/// only if it divides both inputs. `None` means the caller must fall back.
fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let n = a.nvars;
    if a.is_zero() {
        return Some(b.clone());
    }
    if b.is_zero() {
        return Some(a.clone());
    }
    let (ca, cb) = (int_content(a), int_content(b));
    let c = Rational::from_integer(num::integer::gcd(ca.clone(), cb.clone()));
    let Some(v) = (0..n).rev().find(|&v| a.depends_on(v) || b.depends_on(v)) else {
        return Some(Poly::constant(n, c));
    };
    let a = a.scale(&Rational::from_integer(ca).recip());
    let b = b.scale(&Rational::from_integer(cb).recip());
    let mut xi: BigInt = max_abs_int(&a).min(max_abs_int(&b)) * 2 + 29;
    for _ in 0..6 {
        let point = Rational::from_integer(xi.clone());
        if let Some(image) = heuristic_gcd(&a.fix_var(v, &point), &b.fix_var(v, &point)) {
            let mut rest = image;
            let mut g = Poly::zero(n);
            let mut shift = vec![0u32; n];
            while !rest.is_zero() {
                let digit = Poly::from_terms(
                    n,
                    rest.terms.iter().map(|(m, c)| (m.clone(), Rational::from_integer(smod(c.numer(), &xi)))),
                );
                g = g.add(&digit.mul_monomial(&shift));
                rest = rest.sub(&digit).scale(&point.recip());
                shift[v] += 1;
            }
            if !g.is_zero() {
                let g = g.scale(&Rational::from_integer(int_content(&g)).recip());
                if a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                    return Some(g.scale(&c));
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

/// gcd of `start` and every polynomial in `parts`, smallest parts first.
fn gcd_with_parts(start: &Poly, mut parts: Vec<Poly>) -> Poly {
    parts.sort_by_key(|p| p.num_terms());
    let mut g = start.clone();
    for p in &parts {
        g = gcd(&g, p);
        if g.is_constant() {
            return Poly::one(start.nvars);
        }
    }
    g.monic()
}

/// Least common multiple, monic.
pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero(a.nvars);
    }
    let g = gcd(a, b);
    a.mul(&b.div_exact(&g).expect("gcd divides")).monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn x(i: usize) -> Poly {
        Poly::var(3, i)
    }

    #[test]
    fn gcd_of_products() {
        // (x0 + x1)(x2 - 1)^2 and (x0 + x1)(x2 + 2)
        let f = x(0).add(&x(1));
        let g1 = x(2).sub(&Poly::one(3)).pow(2);
        let g2 = x(2).add(&Poly::constant(3, r(2)));
        let a = f.mul(&g1).scale(&r(6));
        let b = f.mul(&g2).scale(&r(-4));
        assert_eq!(gcd(&a, &b), f.monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = x(0).mul(&x(1)).add(&Poly::one(3));
        let b = x(0).sub(&x(2));
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn exact_division() {
        let a = x(0).add(&x(1)).pow(3);
        let b = x(0).add(&x(1));
        assert_eq!(a.div_exact(&b).unwrap(), b.pow(2));
        assert!(b.div_exact(&x(2)).is_none());
    }

    #[test]
    fn diff_power_rule() {
        let p = x(0).pow(3).mul(&x(1));
        assert_eq!(p.diff(0), x(0).pow(2).mul(&x(1)).scale(&r(3)));
    }
}

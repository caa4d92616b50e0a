//! Dense univariate polynomials over the rationals: square-free
//! decomposition, exact rational roots, and numeric roots of the rest.

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use super::{rat_to_f64, Rational};

/// Coefficients low degree first; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<Rational>);

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc();
        QPoly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        QPoly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero());
        let mut r = self.0.clone();
        let dd = d.degree();
        let lc = d.lc();
        if r.len() < d.0.len() {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.0.iter().rev() {
            acc = acc * z + rat_to_f64(c);
        }
        acc
    }

    /// Yun's algorithm: `self = c * prod_i f_i^i` with each `f_i` square-free
    /// and monic. Returns `(i, f_i)` for the non-constant factors.
    pub fn squarefree(&self) -> Vec<(usize, QPoly)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.divrem(&a0).0;
        let mut c = fp.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((i, a.clone()));
            }
            b = b.divrem(&a).0;
            if b.degree() == 0 {
                break;
            }
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Exact rational roots (distinct), by the rational root theorem when the
    /// cleared coefficients are small enough to factor by trial division.
    /// Returns `None` when the search was not attempted.
    pub fn rational_roots(&self) -> Option<Vec<Rational>> {
        if self.degree() == 0 {
            return Some(Vec::new());
        }
        let mut roots = Vec::new();
        // strip x^k
        let mut coeffs = self.0.clone();
        if coeffs[0].is_zero() {
            roots.push(Rational::zero());
            while coeffs[0].is_zero() {
                coeffs.remove(0);
            }
        }
        if coeffs.len() == 1 {
            return Some(roots);
        }
        let l = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let a0 = ints[0].abs().to_u64()?;
        let an = ints.last().unwrap().abs().to_u64()?;
        if a0 > 1_000_000_000_000 || an > 1_000_000_000_000 {
            return None;
        }
        let p = QPoly::new(coeffs);
        let ps = divisors(a0);
        let qs = divisors(an);
        let mut found: Vec<Rational> = Vec::new();
        for q in &qs {
            for pp in &ps {
                for sign in [1i64, -1] {
                    let cand = Rational::new(BigInt::from(*pp) * sign, BigInt::from(*q));
                    if !found.contains(&cand) && p.eval(&cand).is_zero() {
                        found.push(cand);
                    }
                }
            }
        }
        roots.extend(found);
        roots.sort();
        Some(roots)
    }

    /// Numeric roots of a square-free polynomial, from the companion matrix
    /// spectrum polished by Newton steps on the exact polynomial.
    pub fn numeric_roots(&self) -> Vec<Complex64> {
        let p = self.monic();
        let n = p.degree();
        match n {
            0 => return Vec::new(),
            1 => return vec![Complex64::new(-rat_to_f64(&p.0[0]), 0.0)],
            2 => {
                let b = rat_to_f64(&p.0[1]);
                let c = rat_to_f64(&p.0[0]);
                let disc = b * b - 4.0 * c;
                if disc >= 0.0 {
                    let s = disc.sqrt();
                    let sgn = if b >= 0.0 { 1.0 } else { -1.0 };
                    let q = -0.5 * (b + sgn * s);
                    let (r1, r2) = if q != 0.0 { (q, c / q) } else { (0.5 * s, -0.5 * s) };
                    return vec![Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)];
                }
                let im = (-disc).sqrt() / 2.0;
                return vec![Complex64::new(-b / 2.0, im), Complex64::new(-b / 2.0, -im)];
            }
            _ => {}
        }
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            m[(i, n - 1)] = -rat_to_f64(&p.0[i]);
        }
        let eig = m.complex_eigenvalues();
        let dp = p.derivative();
        eig.iter()
            .map(|&z0| {
                let mut z = z0;
                for _ in 0..8 {
                    let d = dp.eval_complex(z);
                    if d.norm() == 0.0 {
                        break;
                    }
                    let step = p.eval_complex(z) / d;
                    z -= step;
                    if step.norm() <= 1e-16 * z.norm().max(1.0) {
                        break;
                    }
                }
                if z.im.abs() <= 1e-14 * z.norm().max(1.0) {
                    z.im = 0.0;
                }
                z
            })
            .collect()
    }
}

fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return vec![1];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
        if d > 1_000_000 {
            break;
        }
    }
    large.reverse();
    small.extend(large);
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    #[test]
    fn squarefree_of_repeated_roots() {
        // (x-1)^2 (x+2)^3 x
        let p = q(&[-1, 1]).mul(&q(&[-1, 1])).mul(&q(&[2, 1]).mul(&q(&[2, 1])).mul(&q(&[2, 1]))).mul(&q(&[0, 1]));
        let sf = p.squarefree();
        assert_eq!(sf.len(), 3);
        assert_eq!(sf[0], (1, q(&[0, 1])));
        assert_eq!(sf[1], (2, q(&[-1, 1])));
        assert_eq!(sf[2], (3, q(&[2, 1])));
    }

    #[test]
    fn rational_roots_found_exactly() {
        // (2x - 1)(x + 3)(x^2 + 1)
        let p = q(&[-1, 2]).mul(&q(&[3, 1])).mul(&q(&[1, 0, 1]));
        let roots = p.rational_roots().unwrap();
        assert_eq!(roots, vec![Rational::from_integer((-3).into()), Rational::new(1.into(), 2.into())]);
    }

    #[test]
    fn numeric_roots_golden_ratio() {
        let p = q(&[-1, -1, 1]);
        let mut r: Vec<f64> = p.numeric_roots().iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r[1] - phi).abs() < 1e-14);
        assert!((r[0] - (1.0 - phi)).abs() < 1e-14);
        let cubic = q(&[1, 0, 0, 1]).divrem(&q(&[1, 1])).0.mul(&q(&[-2, 0, 0, 1]));
        for z in cubic.numeric_roots() {
            assert!(cubic.eval_complex(z).norm() < 1e-12);
        }
    }
}

//! Structure constants, solvability and adapted ideal chains.
//!
//! Indices are zero-based in code; `C[i][j][k]` is the coefficient of
//! `e_i` in `[e_j, e_k]`.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::DiffForm;
use crate::linalg::{in_span, RatMatrix};
use crate::scalars::expr::parse_rational_literal;
use crate::scalars::poly::fmt_rational;
use crate::scalars::{Rational, Scalar, VarSet};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<Rational>,
}

impl StructureConstants {
    pub fn zero(dim: usize) -> Self {
        StructureConstants { dim, c: vec![Rational::zero(); dim * dim * dim] }
    }

    /// Abelian algebra of dimension `n`.
    pub fn abelian(n: usize) -> Self {
        Self::zero(n)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[self.idx(i, j, k)]
    }

    /// Set a single entry without enforcing antisymmetry.
    pub fn set_raw(&mut self, i: usize, j: usize, k: usize, v: Rational) {
        let p = self.idx(i, j, k);
        self.c[p] = v;
    }

    /// Define `[e_j, e_k] = Σ coeffs[i] e_i` (and the antisymmetric partner).
    pub fn set_bracket(&mut self, j: usize, k: usize, coeffs: &[Rational]) {
        assert_eq!(coeffs.len(), self.dim);
        for (i, v) in coeffs.iter().enumerate() {
            self.set_raw(i, j, k, v.clone());
            self.set_raw(i, k, j, -v.clone());
        }
    }

    /// Convenience for integer tables: `(j, k, [(i, coeff)])`, zero-based.
    pub fn from_table(dim: usize, table: &[(usize, usize, &[(usize, Rational)])]) -> Self {
        let mut s = Self::zero(dim);
        for (j, k, entries) in table {
            let mut v = vec![Rational::zero(); dim];
            for (i, c) in entries.iter() {
                v[*i] = c.clone();
            }
            s.set_bracket(*j, *k, &v);
        }
        s
    }

    /// `[u, v]` in coordinates.
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for j in 0..n {
            if u[j].is_zero() {
                continue;
            }
            for k in 0..n {
                if v[k].is_zero() {
                    continue;
                }
                let w = &u[j] * &v[k];
                for (i, o) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        *o += c * &w;
                    }
                }
            }
        }
        out
    }

    pub fn bracket_f64(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        out[i] += crate::scalars::rat_to_f64(c) * u[j] * v[k];
                    }
                }
            }
        }
        out
    }

    /// `[ad(e_m)]^a_b = C^a_{m b}`
    pub fn ad_matrix(&self, m: usize) -> RatMatrix {
        let n = self.dim;
        let mut a = RatMatrix::zeros(n, n);
        for i in 0..n {
            for b in 0..n {
                a.set(i, b, self.get(i, m, b).clone());
            }
        }
        a
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.dim;
        let mut antisymmetry = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    if self.get(i, j, k) != &-self.get(i, k, j).clone() {
                        antisymmetry.push([i + 1, j + 1, k + 1]);
                    }
                }
            }
        }
        let mut jacobi = Vec::new();
        let e = |i: usize| -> Vec<Rational> {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v
        };
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let t1 = self.bracket(&e(a), &self.bracket(&e(b), &e(c)));
                    let t2 = self.bracket(&e(b), &self.bracket(&e(c), &e(a)));
                    let t3 = self.bracket(&e(c), &self.bracket(&e(a), &e(b)));
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| !(x + y + z).is_zero()) {
                        jacobi.push([a + 1, b + 1, c + 1]);
                    }
                }
            }
        }
        ValidationReport { valid: antisymmetry.is_empty() && jacobi.is_empty(), antisymmetry, jacobi }
    }

    /// Span of all brackets `[u, v]` with `u, v` in `space`, as RREF rows.
    fn bracket_span(&self, space: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let mut rows = Vec::new();
        for (p, u) in space.iter().enumerate() {
            for v in &space[p + 1..] {
                let w = self.bracket(u, v);
                if w.iter().any(|x| !x.is_zero()) {
                    rows.push(w);
                }
            }
        }
        rref_basis(&rows, self.dim)
    }

    /// `g ⊇ g' ⊇ g'' ⊇ …` until the terms stabilize. Each term is given by
    /// reduced row-echelon basis vectors.
    pub fn derived_series(&self) -> Vec<Vec<Vec<Rational>>> {
        let n = self.dim;
        let mut series = vec![rref_basis(&RatMatrix::identity(n).to_rows(), n)];
        loop {
            let last = series.last().unwrap();
            if last.is_empty() {
                break;
            }
            let next = self.bracket_span(last);
            if next.len() == last.len() {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().map_or(true, |t| t.is_empty())
    }

    /// Constants in the basis `f_j = Σ_i P[i][j] e_i`.
    pub fn change_basis(&self, p: &RatMatrix) -> Result<StructureConstants> {
        let n = self.dim;
        let pinv = p.inverse()?;
        let mut out = Self::zero(n);
        for a in 0..n {
            for b in 0..n {
                let fa = p.column(a);
                let fb = p.column(b);
                let w = self.bracket(&fa, &fb);
                let coords = pinv.mul_vec(&w);
                for (c, v) in coords.into_iter().enumerate() {
                    out.set_raw(c, a, b, v);
                }
            }
        }
        Ok(out)
    }

    /// Basis adapted to a chain of codimension-one ideals, refining the
    /// derived series. Returns the basis change and the chain data in the
    /// new basis.
    pub fn adapted_chain(&self) -> Result<(BasisChange, AdaptedChain)> {
        let n = self.dim;
        let series = self.derived_series();
        if !series.last().map_or(true, |t| t.is_empty()) {
            return Err(Error::NotSolvable);
        }
        let mut basis: Vec<Vec<Rational>> = Vec::new();
        for term in series.iter().rev() {
            for v in term {
                if !in_span(&basis, v) {
                    basis.push(v.clone());
                }
            }
        }
        debug_assert_eq!(basis.len(), n);
        let p = RatMatrix::from_columns(&basis);
        let change = BasisChange::new(p)?;
        let adapted = self.change_basis(&change.p)?;
        let derived_dims = series.iter().map(|t| t.len()).collect();
        let chain = AdaptedChain::new(adapted, derived_dims)?;
        Ok((change, chain))
    }

    /// Nonzero brackets `[e_j, e_k]`, `j < k`, zero-based.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, Vec<Rational>)> {
        let n = self.dim;
        let mut out = Vec::new();
        for j in 0..n {
            for k in j + 1..n {
                let v: Vec<Rational> = (0..n).map(|i| self.get(i, j, k).clone()).collect();
                if v.iter().any(|x| !x.is_zero()) {
                    out.push((j, k, v));
                }
            }
        }
        out
    }

    /// Restriction to the first `m` basis vectors (must span a subalgebra).
    pub fn restrict(&self, m: usize) -> StructureConstants {
        let mut out = Self::zero(m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    out.set_raw(i, j, k, self.get(i, j, k).clone());
                }
            }
        }
        out
    }
}

fn rref_basis(rows: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = RatMatrix::from_rows(rows.to_vec()).rref();
    (0..pivots.len()).map(|i| r.row(i)).filter(|v| v.len() == n).collect()
}

impl RatMatrix {
    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.nrows()).map(|i| self.row(i)).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    /// One-based `(i, j, k)` with `C^i_{jk} ≠ -C^i_{kj}`.
    pub antisymmetry: Vec<[usize; 3]>,
    /// One-based basis triples violating the Jacobi identity.
    pub jacobi: Vec<[usize; 3]>,
}

/// `f_j = Σ_i P[i][j] e_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange {
    pub p: RatMatrix,
    pub p_inv: RatMatrix,
}

impl BasisChange {
    pub fn new(p: RatMatrix) -> Result<Self> {
        let p_inv = p.inverse()?;
        Ok(BasisChange { p, p_inv })
    }

    pub fn is_identity(&self) -> bool {
        self.p == RatMatrix::identity(self.p.nrows())
    }
}

/// Forms dual to the new basis: `ω̃ = P⁻¹ ω`.
pub fn transform_forms<S: Scalar>(change: &BasisChange, forms: &[DiffForm<S>]) -> Vec<DiffForm<S>> {
    apply_matrix(&change.p_inv, forms)
}

/// `Σ_j M[i][j] ω_j` for each `i`.
pub fn apply_matrix<S: Scalar>(m: &RatMatrix, forms: &[DiffForm<S>]) -> Vec<DiffForm<S>> {
    let n = forms.len();
    (0..m.nrows())
        .map(|i| {
            let mut acc = DiffForm::zero(forms[0].chart(), forms[0].degree());
            for j in 0..n {
                let c = m.get(i, j);
                if !c.is_zero() {
                    acc = acc.add(&forms[j].scale(c));
                }
            }
            acc
        })
        .collect()
}

/// Structure constants in an adapted basis, with the nested ideals
/// `k_s = span{e_1 .. e_{n-s}}` and the restricted adjoint matrices.
#[derive(Clone, Debug)]
pub struct AdaptedChain {
    pub base: StructureConstants,
    /// `restricted[s]` is `ad_s(e_{n-s})` acting on `k_s`, size `(n-s) x (n-s)`.
    pub restricted: Vec<RatMatrix>,
    pub derived_dims: Vec<usize>,
}

impl AdaptedChain {
    /// Accept constants already in an adapted basis; checks the ideal chain.
    pub fn new(base: StructureConstants, derived_dims: Vec<usize>) -> Result<Self> {
        let n = base.dim();
        let restricted = (0..n).map(|s| base.ad_matrix(n - 1 - s).leading_block(n - s)).collect();
        let chain = AdaptedChain { base, restricted, derived_dims };
        if let Some(s) = chain.first_broken_level() {
            return Err(Error::InvalidArgument(format!("span of the first {} basis vectors is not an ideal", n - s)));
        }
        Ok(chain)
    }

    /// Use the given basis as is, when it is already adapted.
    pub fn from_adapted(base: StructureConstants) -> Result<Self> {
        let dims = base.derived_series().iter().map(|t| t.len()).collect();
        Self::new(base, dims)
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Level `s` where `k_s` fails to be an ideal of `k_{s-1}`.
    pub fn first_broken_level(&self) -> Option<usize> {
        let n = self.dim();
        for s in 1..=n {
            let m = n - s;
            for u in 0..=m {
                for v in 0..m {
                    for i in m..n {
                        if !self.base.get(i, u, v).is_zero() {
                            return Some(s);
                        }
                    }
                }
            }
        }
        None
    }

    /// Constants of the ideal `k_s`.
    pub fn ideal_constants(&self, s: usize) -> StructureConstants {
        self.base.restrict(self.dim() - s)
    }
}

/// JSON description of an algebra; indices are one-based.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraJson {
    pub dim: usize,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, String>,
}

impl AlgebraJson {
    pub fn to_constants(&self) -> Result<StructureConstants> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Schema("dim must be positive".into()));
        }
        let mut params = BTreeMap::new();
        for (k, v) in &self.params {
            params.insert(k.clone(), parse_rational_literal(v)?);
        }
        let empty = VarSet::new::<&str>(&[])?;
        let mut sc = StructureConstants::zero(n);
        for b in &self.brackets {
            if b.i == 0 || b.j == 0 || b.i > n || b.j > n {
                return Err(Error::Schema(format!("bracket index out of range: [{}, {}]", b.i, b.j)));
            }
            if b.i == b.j {
                return Err(Error::Schema(format!("bracket [e{0}, e{0}] must vanish", b.i)));
            }
            let mut v = vec![Rational::zero(); n];
            for (k, expr) in &b.coeffs {
                let k: usize = k.parse().map_err(|_| Error::Schema(format!("bad basis index `{k}`")))?;
                if k == 0 || k > n {
                    return Err(Error::Schema(format!("basis index {k} out of range")));
                }
                let r = crate::scalars::expr::parse_rational_with(expr, &empty, &params)?;
                v[k - 1] = r
                    .constant_value()
                    .ok_or_else(|| Error::Schema(format!("coefficient `{expr}` is not a number")))?;
            }
            sc.set_bracket(b.i - 1, b.j - 1, &v);
        }
        Ok(sc)
    }

    pub fn from_constants(sc: &StructureConstants) -> Self {
        let brackets = sc
            .nonzero_brackets()
            .into_iter()
            .map(|(j, k, v)| BracketJson {
                i: j + 1,
                j: k + 1,
                coeffs: v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| ((i + 1).to_string(), fmt_rational(c)))
                    .collect(),
            })
            .collect();
        AlgebraJson { dim: sc.dim(), brackets, params: BTreeMap::new() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn heisenberg() -> StructureConstants {
        StructureConstants::from_table(3, &[(1, 2, &[(0, r(1))])])
    }

    #[test]
    fn jacobi_violation_reported() {
        let bad = StructureConstants::from_table(3, &[(0, 1, &[(0, r(1))]), (0, 2, &[(1, r(1))])]);
        let rep = bad.validate();
        assert!(!rep.valid);
        assert_eq!(rep.jacobi, vec![[1, 2, 3]]);
        assert!(heisenberg().validate().valid);
    }

    #[test]
    fn sl2_not_solvable() {
        let sl2 = StructureConstants::from_table(
            3,
            &[(0, 1, &[(1, r(2))]), (0, 2, &[(2, r(-2))]), (1, 2, &[(0, r(1))])],
        );
        assert!(!sl2.is_solvable());
        assert!(matches!(sl2.adapted_chain(), Err(Error::NotSolvable)));
    }

    #[test]
    fn heisenberg_series() {
        let s = heisenberg().derived_series();
        assert_eq!(s.iter().map(|t| t.len()).collect::<Vec<_>>(), vec![3, 1, 0]);
    }

    #[test]
    fn change_basis_round_trip() {
        let h = heisenberg();
        let p = RatMatrix::from_i64(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let h2 = h.change_basis(&p).unwrap();
        // [f2, f3] = e1 = f1 / 2
        assert_eq!(h2.get(0, 1, 2), &Rational::new(1.into(), 2.into()));
        let back = h2.change_basis(&p.inverse().unwrap()).unwrap();
        assert_eq!(back, h);
    }
}

//! Differential forms, vector fields and maps over a coordinate chart.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::StructureConstants;
use crate::sampling::{par_map, random_vectors, rel_diff, worst, Domain};
use crate::scalars::{IntegralScalar, Rational, Scalar, VarSet};

/// Sort an index tuple; `None` if it repeats an index, else the sign of the permutation.
fn canonical(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, odd))
    }
}

/// A degree-`p` form `Σ c_I dx^I` with strictly increasing index tuples `I`.
#[derive(Clone)]
pub struct DiffForm<S: Scalar> {
    chart: VarSet,
    degree: usize,
    terms: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> DiffForm<S> {
    pub fn zero(chart: &VarSet, degree: usize) -> Self {
        DiffForm { chart: chart.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn function(f: S) -> Self {
        let chart = f.chart().clone();
        Self::from_terms(&chart, 0, vec![(vec![], f)])
    }

    /// `dx^i`
    pub fn dx(chart: &VarSet, i: usize) -> Self {
        Self::from_terms(chart, 1, vec![(vec![i], S::one(chart))])
    }

    /// `Σ_i c_i dx^i`
    pub fn from_components(chart: &VarSet, comps: Vec<S>) -> Self {
        Self::from_terms(chart, 1, comps.into_iter().enumerate().map(|(i, c)| (vec![i], c)).collect())
    }

    /// Accepts unsorted tuples; reorders with sign and merges.
    pub fn from_terms(chart: &VarSet, degree: usize, terms: Vec<(Vec<usize>, S)>) -> Self {
        let mut out = Self::zero(chart, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree, "index tuple has wrong length");
            assert!(idx.iter().all(|&i| i < chart.len()), "index out of range");
            if let Some((k, odd)) = canonical(&idx) {
                out.accumulate(k, if odd { c.neg() } else { c });
            }
        }
        out
    }

    fn accumulate(&mut self, k: Vec<usize>, c: S) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&k) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(k, v);
        }
    }

    pub fn chart(&self) -> &VarSet {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &[usize]) -> S {
        self.terms.get(idx).cloned().unwrap_or_else(|| S::zero(&self.chart))
    }

    /// Coefficients of a 1-form, one per coordinate.
    pub fn components(&self) -> Vec<S> {
        assert_eq!(self.degree, 1);
        (0..self.chart.len()).map(|i| self.coeff(&[i])).collect()
    }

    /// Coefficient of a 0-form.
    pub fn as_function(&self) -> S {
        assert_eq!(self.degree, 0);
        self.coeff(&[])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, o: &Self) -> Result<()> {
        self.chart.check_same(&o.chart)?;
        if self.degree != o.degree {
            return Err(Error::InvalidArgument(format!("degree {} vs {}", self.degree, o.degree)));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.accumulate(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("form addition")
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map_coeffs(|c| c.scale(r))
    }

    pub fn mul_scalar(&self, f: &S) -> Self {
        self.map_coeffs(|c| c.mul(f))
    }

    fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        let mut out = Self::zero(&self.chart, self.degree);
        for (k, c) in &self.terms {
            out.accumulate(k.clone(), f(c));
        }
        out
    }

    pub fn try_wedge(&self, o: &Self) -> Result<Self> {
        self.chart.check_same(&o.chart)?;
        let mut out = Self::zero(&self.chart, self.degree + o.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let idx: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some((k, odd)) = canonical(&idx) {
                    let c = ca.mul(cb);
                    out.accumulate(k, if odd { c.neg() } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, o: &Self) -> Self {
        self.try_wedge(o).expect("wedge")
    }

    pub fn exterior_d(&self) -> Self {
        let n = self.chart.len();
        let mut out = Self::zero(&self.chart, self.degree + 1);
        for (idx, c) in &self.terms {
            for v in 0..n {
                if idx.contains(&v) {
                    continue;
                }
                let dc = c.diff(v);
                if dc.is_zero() {
                    continue;
                }
                let mut k = vec![v];
                k.extend(idx);
                let (k, odd) = canonical(&k).unwrap();
                out.accumulate(k, if odd { dc.neg() } else { dc });
            }
        }
        out
    }

    /// Contraction `ι_X α`.
    pub fn interior(&self, x: &VectorField<S>) -> Result<Self> {
        self.chart.check_same(&x.chart)?;
        if self.degree == 0 {
            return Err(Error::InvalidArgument("interior product of a 0-form".into()));
        }
        let mut out = Self::zero(&self.chart, self.degree - 1);
        for (idx, c) in &self.terms {
            for (pos, &i) in idx.iter().enumerate() {
                let xi = &x.comps[i];
                if xi.is_zero() {
                    continue;
                }
                let mut k = idx.clone();
                k.remove(pos);
                let v = c.mul(xi);
                out.accumulate(k, if pos % 2 == 1 { v.neg() } else { v });
            }
        }
        Ok(out)
    }

    /// `φ* α`, composing every coefficient symbolically.
    pub fn pullback(&self, map: &PointMap<S>) -> Result<Self> {
        self.chart.check_same(&map.target)?;
        let dphi: Vec<DiffForm<S>> =
            map.comps.iter().map(|f| DiffForm::function(f.clone()).exterior_d()).collect();
        let mut out = Self::zero(&map.source, self.degree);
        for (idx, c) in &self.terms {
            let mut acc = DiffForm::function(c.compose(&map.source, &map.comps)?);
            for &i in idx {
                acc = acc.wedge(&dphi[i]);
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Re-home into a larger chart; coordinate `i` becomes `map[i]`.
    pub fn embed(&self, target: &VarSet, map: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.iter().map(|&i| map[i]).collect(), c.embed(target, map)))
            .collect();
        Self::from_terms(target, self.degree, terms)
    }

    /// `α_p(v_1, …, v_p)`.
    pub fn evaluate_on(&self, point: &[f64], vectors: &[Vec<f64>]) -> Result<f64> {
        assert_eq!(vectors.len(), self.degree);
        let p = self.degree;
        let mut acc = 0.0;
        for (idx, c) in &self.terms {
            let m = DMatrix::from_fn(p, p, |r, s| vectors[s][idx[r]]);
            let det = if p == 0 { 1.0 } else { m.determinant() };
            acc += c.evaluate(point)? * det;
        }
        Ok(acc)
    }

    pub fn magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let basis: Vec<String> = k.iter().map(|&i| format!("d{}", self.chart.name(i))).collect();
                if basis.is_empty() {
                    c.to_text()
                } else {
                    format!("({})*{}", c.to_text(), basis.join("^"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<S: Scalar> PartialEq for DiffForm<S> {
    fn eq(&self, o: &Self) -> bool {
        self.chart == o.chart && self.degree == o.degree && self.sub(o).is_zero()
    }
}

impl<S: Scalar> fmt::Debug for DiffForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// `Σ X^i ∂_i`
#[derive(Clone)]
pub struct VectorField<S: Scalar> {
    chart: VarSet,
    comps: Vec<S>,
}

impl<S: Scalar> VectorField<S> {
    pub fn new(chart: &VarSet, comps: Vec<S>) -> Self {
        assert_eq!(comps.len(), chart.len());
        VectorField { chart: chart.clone(), comps }
    }

    pub fn zero(chart: &VarSet) -> Self {
        Self::new(chart, (0..chart.len()).map(|_| S::zero(chart)).collect())
    }

    /// `∂_i`
    pub fn coordinate(chart: &VarSet, i: usize) -> Self {
        let comps = (0..chart.len()).map(|j| if j == i { S::one(chart) } else { S::zero(chart) }).collect();
        Self::new(chart, comps)
    }

    pub fn chart(&self) -> &VarSet {
        &self.chart
    }

    pub fn components(&self) -> &[S] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// `X(f)`
    pub fn apply(&self, f: &S) -> S {
        let mut acc = S::zero(&self.chart);
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul(&f.diff(i)));
            }
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        self.chart.check_same(&o.chart).expect("vector field addition");
        Self::new(&self.chart, self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rational::from_integer(1.into())))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(&self.chart, self.comps.iter().map(|c| c.scale(r)).collect())
    }

    pub fn mul_scalar(&self, f: &S) -> Self {
        Self::new(&self.chart, self.comps.iter().map(|c| c.mul(f)).collect())
    }

    pub fn lie_bracket(&self, o: &Self) -> Result<Self> {
        self.chart.check_same(&o.chart)?;
        let comps = (0..self.chart.len()).map(|i| self.apply(&o.comps[i]).sub(&o.apply(&self.comps[i]))).collect();
        Ok(Self::new(&self.chart, comps))
    }

    pub fn evaluate(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.comps.iter().map(|c| c.evaluate(point)).collect()
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})*d/d{}", c.to_text(), self.chart.name(i)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl<S: Scalar> PartialEq for VectorField<S> {
    fn eq(&self, o: &Self) -> bool {
        self.chart == o.chart && self.sub(o).is_zero()
    }
}

impl<S: Scalar> fmt::Debug for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// A map from `source` to `target` given by one scalar per target coordinate.
#[derive(Clone, Debug)]
pub struct PointMap<S: Scalar> {
    pub source: VarSet,
    pub target: VarSet,
    pub comps: Vec<S>,
}

impl<S: Scalar> PointMap<S> {
    pub fn new(target: &VarSet, comps: Vec<S>) -> Result<Self> {
        if comps.len() != target.len() {
            return Err(Error::InvalidArgument("component count differs from target dimension".into()));
        }
        let source = comps.first().map(|c| c.chart().clone()).unwrap_or_else(|| target.clone());
        for c in &comps {
            source.check_same(c.chart())?;
        }
        Ok(PointMap { source, target: target.clone(), comps })
    }

    pub fn identity(chart: &VarSet) -> Self {
        PointMap { source: chart.clone(), target: chart.clone(), comps: (0..chart.len()).map(|i| S::variable(chart, i)).collect() }
    }

    /// `∂φ^i/∂x^j` symbolically.
    pub fn jacobian(&self) -> Vec<Vec<S>> {
        self.comps.iter().map(|c| (0..self.source.len()).map(|j| c.diff(j)).collect()).collect()
    }
}

/// Anything that can be evaluated together with its Jacobian at a point.
pub trait NumericMap: Sync {
    fn source_dim(&self) -> usize;
    fn eval_with_jacobian(&self, point: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)>;
}

/// A map with a precomputed symbolic Jacobian.
pub struct SymbolicMap<T> {
    dim: usize,
    comps: Vec<T>,
    jac: Vec<Vec<T>>,
    eval: fn(&T, &[f64]) -> Result<f64>,
}

impl<S: Scalar> SymbolicMap<S> {
    pub fn from_point_map(m: &PointMap<S>) -> Self {
        SymbolicMap { dim: m.source.len(), comps: m.comps.clone(), jac: m.jacobian(), eval: |c, p| c.evaluate(p) }
    }
}

impl<I: IntegralScalar> SymbolicMap<I> {
    /// Map given by antiderivative-class functions (may contain logarithms).
    pub fn from_integrals(fs: &[I], dim: usize) -> SymbolicMap<IntegralWrap<I>> {
        let comps: Vec<IntegralWrap<I>> = fs.iter().map(|f| IntegralWrap::Value(f.clone())).collect();
        let jac = fs.iter().map(|f| (0..dim).map(|j| IntegralWrap::Deriv(f.diff(j))).collect()).collect();
        SymbolicMap {
            dim,
            comps,
            jac,
            eval: |c, p| match c {
                IntegralWrap::Value(v) => v.evaluate(p),
                IntegralWrap::Deriv(d) => d.evaluate(p),
            },
        }
    }
}

pub enum IntegralWrap<I: IntegralScalar> {
    Value(I),
    Deriv(I::Coeff),
}

impl<T: Sync + Send> NumericMap for SymbolicMap<T> {
    fn source_dim(&self) -> usize {
        self.dim
    }

    fn eval_with_jacobian(&self, point: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let v: Vec<f64> = self.comps.iter().map(|c| (self.eval)(c, point)).collect::<Result<_>>()?;
        let mut j = DMatrix::zeros(self.comps.len(), self.dim);
        for (r, row) in self.jac.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                j[(r, c)] = (self.eval)(e, point)?;
            }
        }
        Ok((v, j))
    }
}

/// Outcome of a seeded numeric comparison.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NumericCheck {
    pub mode: &'static str,
    pub samples: usize,
    pub max_rel_err: f64,
    pub tol: f64,
    pub pass: bool,
}

impl NumericCheck {
    pub fn symbolic(pass: bool) -> Self {
        NumericCheck { mode: "symbolic", samples: 0, max_rel_err: if pass { 0.0 } else { f64::INFINITY }, tol: 0.0, pass }
    }

    pub fn numeric(samples: usize, max_rel_err: f64, tol: f64) -> Self {
        NumericCheck { mode: "numeric", samples, max_rel_err, tol, pass: max_rel_err <= tol }
    }
}

/// Compare `φ* α_i` with `β_i` on seeded random tangent vectors at sampled points.
pub fn pullback_numeric<S: Scalar, T: Scalar>(
    map: &dyn NumericMap,
    alpha: &[DiffForm<T>],
    beta: &[DiffForm<S>],
    domain: &Domain,
    samples: usize,
    seed: u64,
    tol: f64,
) -> NumericCheck {
    let points = domain.sample(samples, seed);
    let errs = par_map(&points.iter().enumerate().collect::<Vec<_>>(), |(k, p)| {
        let Ok((q, jac)) = map.eval_with_jacobian(p) else { return f64::NAN };
        let mut e: f64 = 0.0;
        for (a, b) in alpha.iter().zip(beta) {
            let vs = random_vectors(domain.dim(), b.degree(), seed ^ (*k as u64).wrapping_mul(0x9e37_79b9));
            let pushed: Vec<Vec<f64>> =
                vs.iter().map(|v| (&jac * DMatrix::from_column_slice(v.len(), 1, v)).iter().copied().collect()).collect();
            match (a.evaluate_on(&q, &pushed), b.evaluate_on(p, &vs)) {
                (Ok(x), Ok(y)) => e = e.max(rel_diff(x, y)),
                _ => return f64::NAN,
            }
        }
        e
    });
    NumericCheck::numeric(samples, worst(errs), tol)
}

/// `dω^i + ½ C^i_{jk} ω^j ∧ ω^k` for each `i`.
pub fn structure_residual<S: Scalar>(forms: &[DiffForm<S>], c: &StructureConstants) -> Vec<DiffForm<S>> {
    let n = c.dim();
    assert_eq!(forms.len(), n, "form count differs from algebra dimension");
    let wedges: Vec<Vec<Option<DiffForm<S>>>> = (0..n)
        .map(|j| (0..n).map(|k| if j < k { Some(forms[j].wedge(&forms[k])) } else { None }).collect())
        .collect();
    (0..n)
        .map(|i| {
            let mut acc = forms[i].exterior_d();
            for j in 0..n {
                for k in j + 1..n {
                    let cij = c.get(i, j, k);
                    if !cij.is_zero() {
                        acc = acc.add(&wedges[j][k].as_ref().unwrap().scale(cij));
                    }
                }
            }
            acc
        })
        .collect()
}

/// `f` with `df = ω` and `f(basepoint) = 0`, by peeling variables in chart order.
pub fn potential<S: Scalar>(form: &DiffForm<S>, basepoint: &[Rational]) -> Result<S::Integral> {
    if form.degree() != 1 {
        return Err(Error::InvalidArgument("potential needs a 1-form".into()));
    }
    let chart = form.chart().clone();
    let n = chart.len();
    if basepoint.len() != n {
        return Err(Error::InvalidArgument("basepoint dimension differs from chart".into()));
    }
    let d = form.exterior_d();
    if !d.is_zero() {
        return Err(Error::NotClosed(format!("d(form) = {}", d.to_text())));
    }
    let mut residual = form.components();
    let mut total = S::Integral::zero(&chart);
    for v in 0..n {
        if residual[v].is_zero() {
            continue;
        }
        let g = residual[v].antideriv(v, &basepoint[v])?;
        for (w, r) in residual.iter_mut().enumerate().skip(v + 1) {
            *r = r.sub(&g.diff(w));
        }
        residual[v] = S::zero(&chart);
        total = total.add(&g);
    }
    for v in 0..n {
        let back = total.diff(v);
        if !back.sub(&form.coeff(&[v])).is_zero() {
            return Err(Error::NotClosed(format!("quadrature residual in d{}", chart.name(v))));
        }
    }
    let mut at_base = total.clone();
    for (v, b) in basepoint.iter().enumerate() {
        at_base = at_base
            .fix_var(v, b)
            .map_err(|_| Error::BasepointOnPole(format!("{} = {}", chart.name(v), crate::scalars::poly::fmt_rational(b))))?;
    }
    Ok(total.sub(&at_base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::expr::{parse_exppoly, parse_rational};
    use crate::scalars::{ExpPoly, RationalFunction};

    fn chart3() -> VarSet {
        VarSet::numbered("x", 3)
    }

    fn rf(s: &str, c: &VarSet) -> RationalFunction {
        parse_rational(s, c).unwrap()
    }

    #[test]
    fn d_of_linear_forms() {
        let c = chart3();
        let dx1 = DiffForm::<RationalFunction>::dx(&c, 0);
        assert!(dx1.exterior_d().is_zero());
        let a = DiffForm::from_terms(&c, 1, vec![(vec![1], rf("x3", &c))]);
        let want = DiffForm::from_terms(&c, 2, vec![(vec![1, 2], rf("-1", &c))]);
        assert_eq!(a.exterior_d(), want);
    }

    #[test]
    fn heisenberg_coframe_residual() {
        let c = chart3();
        let t1 = DiffForm::from_components(&c, vec![rf("1", &c), rf("x3", &c), rf("0", &c)]);
        let t2 = DiffForm::dx(&c, 1);
        let t3 = DiffForm::dx(&c, 2);
        let h = StructureConstants::from_table(3, &[(1, 2, &[(0, Rational::from_integer(1.into()))])]);
        assert!(structure_residual(&[t1, t2, t3], &h).iter().all(|r| r.is_zero()));
    }

    #[test]
    fn bracket_and_interior() {
        let c = VarSet::new(&["x", "y"]).unwrap();
        let x_dx = VectorField::new(&c, vec![rf("x", &c), rf("0", &c)]);
        let dx = VectorField::<RationalFunction>::coordinate(&c, 0);
        assert_eq!(x_dx.lie_bracket(&dx).unwrap(), dx.scale(&Rational::from_integer((-1).into())));
        let w = DiffForm::<RationalFunction>::dx(&c, 0).wedge(&DiffForm::dx(&c, 1));
        let i = w.interior(&dx).unwrap();
        assert_eq!(i, DiffForm::dx(&c, 1));
    }

    #[test]
    fn potential_rational_and_exp() {
        let c = VarSet::new(&["x", "y"]).unwrap();
        let f = rf("x^2*y + y/x", &c);
        let w = DiffForm::function(f.clone()).exterior_d();
        let base = vec![Rational::from_integer(1.into()), Rational::from_integer(0.into())];
        let p = potential(&w, &base).unwrap();
        assert_eq!(p.to_rational().unwrap(), f);

        let e = parse_exppoly("exp(2*x - y)*cos(y) + x*y", &c).unwrap();
        let w = DiffForm::function(e.clone()).exterior_d();
        let p = potential(&w, &[Rational::zero(), Rational::zero()]).unwrap();
        let shift = e.sub(&p);
        assert!(shift.diff(0).is_zero() && shift.diff(1).is_zero());
        assert!(ExpPoly::evaluate(&p, &[0.0, 0.0]).abs() < 1e-12);
    }

    #[test]
    fn potential_rejects_non_closed() {
        let c = VarSet::new(&["x", "y"]).unwrap();
        let w = DiffForm::from_components(&c, vec![rf("y", &c), rf("0", &c)]);
        assert!(matches!(potential(&w, &[Rational::zero(), Rational::zero()]), Err(Error::NotClosed(_))));
    }

    #[test]
    fn potential_with_log() {
        let c = VarSet::new(&["x", "u"]).unwrap();
        // x - log|u| has differential dx - du/u
        let w = DiffForm::from_components(&c, vec![rf("1", &c), rf("-1/u", &c)]);
        let p = potential(&w, &[Rational::zero(), Rational::from_integer(1.into())]).unwrap();
        assert!((p.evaluate(&[0.5, 2.0]).unwrap() - (0.5 - 2f64.ln())).abs() < 1e-12);
        let on_pole = potential(&w, &[Rational::zero(), Rational::zero()]);
        assert!(matches!(on_pole, Err(Error::BasepointOnPole(_))));
    }
}

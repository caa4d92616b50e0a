//! Coefficient algebras for forms and vector fields.
//!
//! Two scalar classes are supported: exact rational functions over ℚ and
//! exponential polynomials with floating-point coefficients. Both implement
//! [`Scalar`], which is what the exterior calculus and the reduction
//! pipeline are generic over.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num::ToPrimitive;

use crate::error::Result;
use crate::linalg::RatMatrix;

pub mod expr;
pub mod exppoly;
pub mod logext;
pub mod poly;
pub mod qpoly;
pub mod ratfunc;
pub mod ratint;
pub mod upoly;
mod varset;

pub use exppoly::{ExpPoly, Term, TrigKind};
pub use logext::LogExtendedScalar;
pub use poly::Poly;
pub use ratfunc::RationalFunction;
pub use varset::VarSet;

pub type Rational = num::BigRational;

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational from a finite float (every finite double is dyadic).
pub fn f64_to_rat(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

static ZERO_TOL: AtomicU64 = AtomicU64::new(1e-10f64.to_bits());
static CLUSTER_TOL: AtomicU64 = AtomicU64::new(1e-7f64.to_bits());

/// Coefficients of exponential polynomials at or below this magnitude are dropped.
pub fn zero_tol() -> f64 {
    f64::from_bits(ZERO_TOL.load(Ordering::Relaxed))
}

pub fn set_zero_tol(t: f64) {
    assert!(t > 0.0, "tolerance must be positive");
    ZERO_TOL.store(t.to_bits(), Ordering::Relaxed);
}

/// Distinct eigenvalues closer than this are reported as ambiguous.
pub fn cluster_tol() -> f64 {
    f64::from_bits(CLUSTER_TOL.load(Ordering::Relaxed))
}

pub fn set_cluster_tol(t: f64) {
    assert!(t > 0.0, "tolerance must be positive");
    CLUSTER_TOL.store(t.to_bits(), Ordering::Relaxed);
}

/// A commutative coefficient ring over a chart, closed under partial
/// derivatives, with antiderivatives landing in [`Scalar::Integral`].
pub trait Scalar: Clone + fmt::Debug + PartialEq + Send + Sync + Sized + 'static {
    type Integral: IntegralScalar<Coeff = Self>;

    /// Short class name used in reports.
    const CLASS: &'static str;

    fn chart(&self) -> &VarSet;
    fn zero(chart: &VarSet) -> Self;
    fn one(chart: &VarSet) -> Self;
    fn from_rational(chart: &VarSet, r: &Rational) -> Self;
    fn variable(chart: &VarSet, i: usize) -> Self;

    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, r: &Rational) -> Self;

    fn diff(&self, v: usize) -> Self;
    fn evaluate(&self, point: &[f64]) -> Result<f64>;

    /// `self` with variable `i` replaced by `bindings[i]` (all over `target`).
    fn compose(&self, target: &VarSet, bindings: &[Self]) -> Result<Self>;

    /// Re-home into a larger chart; variable `i` becomes `map[i]`.
    fn embed(&self, target: &VarSet, map: &[usize]) -> Self;

    /// Antiderivative in `v`, normalized to vanish on `v = base` when the
    /// scalar is defined there.
    fn antideriv(&self, v: usize, base: &Rational) -> Result<Self::Integral>;

    /// `exp(self * a)` entrywise as a matrix of scalars.
    fn exp_factor(&self, a: &RatMatrix) -> Result<Vec<Vec<Self>>>;

    fn to_text(&self) -> String;

    /// Largest absolute coefficient, used for tolerance reports.
    fn magnitude(&self) -> f64;
}

/// Values of antiderivatives: the coefficient class itself or an extension.
pub trait IntegralScalar: Clone + fmt::Debug + Send + Sync + Sized + 'static {
    type Coeff: Scalar<Integral = Self>;

    fn zero(chart: &VarSet) -> Self;
    fn from_coeff(c: Self::Coeff) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn diff(&self, v: usize) -> Self::Coeff;
    fn evaluate(&self, point: &[f64]) -> Result<f64>;
    fn to_coeff(&self) -> Option<Self::Coeff>;
    /// Substitute a value for variable `v`.
    fn fix_var(&self, v: usize, value: &Rational) -> Result<Self>;
    fn to_text(&self) -> String;
}

impl Scalar for RationalFunction {
    type Integral = LogExtendedScalar;
    const CLASS: &'static str = "rational";

    fn chart(&self) -> &VarSet {
        RationalFunction::chart(self)
    }
    fn zero(chart: &VarSet) -> Self {
        RationalFunction::zero(chart)
    }
    fn one(chart: &VarSet) -> Self {
        RationalFunction::one(chart)
    }
    fn from_rational(chart: &VarSet, r: &Rational) -> Self {
        RationalFunction::constant(chart, r.clone())
    }
    fn variable(chart: &VarSet, i: usize) -> Self {
        RationalFunction::var(chart, i)
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RationalFunction::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RationalFunction::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RationalFunction::mul(self, o)
    }
    fn neg(&self) -> Self {
        RationalFunction::neg(self)
    }
    fn scale(&self, r: &Rational) -> Self {
        RationalFunction::scale(self, r)
    }
    fn diff(&self, v: usize) -> Self {
        RationalFunction::diff(self, v)
    }
    fn evaluate(&self, point: &[f64]) -> Result<f64> {
        RationalFunction::evaluate(self, point)
    }
    fn compose(&self, target: &VarSet, bindings: &[Self]) -> Result<Self> {
        RationalFunction::compose(self, target, bindings)
    }
    fn embed(&self, target: &VarSet, map: &[usize]) -> Self {
        RationalFunction::embed(self, target, map)
    }
    fn antideriv(&self, v: usize, base: &Rational) -> Result<LogExtendedScalar> {
        let big = ratint::integrate(self, v)?;
        match big.fix_var(v, base) {
            Ok(at_base) => Ok(big.sub(&at_base)),
            // pole on the base hyperplane: constant is fixed by the caller
            Err(_) => Ok(big),
        }
    }
    fn exp_factor(&self, a: &RatMatrix) -> Result<Vec<Vec<Self>>> {
        crate::matexp::nilpotent_exp(a, self)
    }
    fn to_text(&self) -> String {
        RationalFunction::to_text(self)
    }
    fn magnitude(&self) -> f64 {
        self.numer().terms().map(|(_, c)| rat_to_f64(c).abs()).fold(0.0, f64::max)
    }
}

impl IntegralScalar for LogExtendedScalar {
    type Coeff = RationalFunction;

    fn zero(chart: &VarSet) -> Self {
        LogExtendedScalar::zero(chart)
    }
    fn from_coeff(c: RationalFunction) -> Self {
        LogExtendedScalar::from_rational(c)
    }
    fn add(&self, o: &Self) -> Self {
        LogExtendedScalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        LogExtendedScalar::sub(self, o)
    }
    fn neg(&self) -> Self {
        LogExtendedScalar::neg(self)
    }
    fn is_zero(&self) -> bool {
        LogExtendedScalar::is_zero(self)
    }
    fn diff(&self, v: usize) -> RationalFunction {
        LogExtendedScalar::diff(self, v)
    }
    fn evaluate(&self, point: &[f64]) -> Result<f64> {
        LogExtendedScalar::evaluate(self, point)
    }
    fn to_coeff(&self) -> Option<RationalFunction> {
        self.to_rational()
    }
    fn fix_var(&self, v: usize, value: &Rational) -> Result<Self> {
        LogExtendedScalar::fix_var(self, v, value)
    }
    fn to_text(&self) -> String {
        LogExtendedScalar::to_text(self)
    }
}

impl Scalar for ExpPoly {
    type Integral = ExpPoly;
    const CLASS: &'static str = "exppoly";

    fn chart(&self) -> &VarSet {
        ExpPoly::chart(self)
    }
    fn zero(chart: &VarSet) -> Self {
        ExpPoly::zero(chart)
    }
    fn one(chart: &VarSet) -> Self {
        ExpPoly::one(chart)
    }
    fn from_rational(chart: &VarSet, r: &Rational) -> Self {
        ExpPoly::constant(chart, rat_to_f64(r))
    }
    fn variable(chart: &VarSet, i: usize) -> Self {
        ExpPoly::var(chart, i)
    }
    fn is_zero(&self) -> bool {
        ExpPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        ExpPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ExpPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        ExpPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        ExpPoly::neg(self)
    }
    fn scale(&self, r: &Rational) -> Self {
        ExpPoly::scale(self, rat_to_f64(r))
    }
    fn diff(&self, v: usize) -> Self {
        ExpPoly::diff(self, v)
    }
    fn evaluate(&self, point: &[f64]) -> Result<f64> {
        Ok(ExpPoly::evaluate(self, point))
    }
    fn compose(&self, target: &VarSet, bindings: &[Self]) -> Result<Self> {
        self.substitute(target, bindings)
    }
    fn embed(&self, target: &VarSet, map: &[usize]) -> Self {
        ExpPoly::embed(self, target, map)
    }
    fn antideriv(&self, v: usize, base: &Rational) -> Result<ExpPoly> {
        Ok(ExpPoly::antideriv(self, v, rat_to_f64(base)))
    }
    fn exp_factor(&self, a: &RatMatrix) -> Result<Vec<Vec<Self>>> {
        let e = crate::matexp::sym_exp(a, "t")?;
        e.at(self)
    }
    fn to_text(&self) -> String {
        ExpPoly::to_text(self)
    }
    fn magnitude(&self) -> f64 {
        self.max_abs_coeff()
    }
}

impl IntegralScalar for ExpPoly {
    type Coeff = ExpPoly;

    fn zero(chart: &VarSet) -> Self {
        ExpPoly::zero(chart)
    }
    fn from_coeff(c: ExpPoly) -> Self {
        c
    }
    fn add(&self, o: &Self) -> Self {
        ExpPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ExpPoly::sub(self, o)
    }
    fn neg(&self) -> Self {
        ExpPoly::neg(self)
    }
    fn is_zero(&self) -> bool {
        ExpPoly::is_zero(self)
    }
    fn diff(&self, v: usize) -> ExpPoly {
        ExpPoly::diff(self, v)
    }
    fn evaluate(&self, point: &[f64]) -> Result<f64> {
        Ok(ExpPoly::evaluate(self, point))
    }
    fn to_coeff(&self) -> Option<ExpPoly> {
        Some(self.clone())
    }
    fn fix_var(&self, v: usize, value: &Rational) -> Result<Self> {
        Ok(ExpPoly::fix_var(self, v, rat_to_f64(value)))
    }
    fn to_text(&self) -> String {
        ExpPoly::to_text(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tolerances() {
        assert_eq!(zero_tol(), 1e-10);
        assert_eq!(cluster_tol(), 1e-7);
    }
}

//! Inductive reduction of a Maurer–Cartan system to exact differentials.
//!
//! At level `s` the current block holds `m = n - s` forms satisfying the
//! structure equations of the ideal `k_s`. The last form is closed, so it
//! has a potential `f`; multiplying the block by `exp(f A)` with
//! `A = ad_s(e_m)` leaves `m - 1` forms satisfying the equations of
//! `k_{s+1}`, and the process repeats.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::config::VerifyMode;
use crate::error::{Error, Result};
use crate::forms::{pullback_numeric, structure_residual, DiffForm, NumericCheck, NumericMap, PointMap, SymbolicMap};
use crate::liealg::AdaptedChain;
use crate::linalg::RatMatrix;
use crate::sampling::{par_map, rel_diff, worst, Domain};
use crate::scalars::{IntegralScalar, Rational, Scalar, VarSet};

#[derive(Clone, Debug)]
pub struct ReductionStep<S: Scalar> {
    /// Ideal level `s`; the step produces the function with one-based index `n - s`.
    pub level: usize,
    pub function: S::Integral,
    /// `ad_s(e_{n-s})`
    pub generator: RatMatrix,
    /// `exp(f · generator)`
    pub factor: Vec<Vec<S>>,
}

#[derive(Clone, Debug)]
pub struct ReductionTrace<S: Scalar> {
    pub chain: AdaptedChain,
    pub chart: VarSet,
    pub basepoint: Vec<Rational>,
    pub input: Vec<DiffForm<S>>,
    pub steps: Vec<ReductionStep<S>>,
    /// Forms left after an early stop; empty once the reduction is complete.
    pub remaining: Vec<DiffForm<S>>,
}

fn residual_level<S: Scalar>(forms: &[DiffForm<S>], chain: &AdaptedChain, s: usize) -> Result<()> {
    let c = chain.ideal_constants(s);
    for (i, r) in structure_residual(forms, &c).iter().enumerate() {
        if !r.is_zero() {
            return Err(Error::ResidualNonzero { level: s, detail: format!("equation {}: {}", i + 1, r.to_text()) });
        }
    }
    Ok(())
}

fn identity<S: Scalar>(chart: &VarSet, m: usize) -> Vec<Vec<S>> {
    (0..m).map(|i| (0..m).map(|j| if i == j { S::one(chart) } else { S::zero(chart) }).collect()).collect()
}

/// `exp(f A)` with `f` taken from the antiderivative class.
fn factor_for<S: Scalar>(f: &S::Integral, a: &RatMatrix, chart: &VarSet, sign: bool) -> Result<Vec<Vec<S>>> {
    if a.is_zero() {
        return Ok(identity(chart, a.nrows()));
    }
    let coeff = f.to_coeff().ok_or_else(|| {
        Error::NonElementaryInClass(format!("exponent {} contains logarithms", f.to_text()))
    })?;
    let coeff = if sign { coeff.neg() } else { coeff };
    coeff.exp_factor(a)
}

/// `Σ_j m[i][j] ω_j` for each row of a scalar matrix.
pub fn apply_scalar_matrix<S: Scalar>(m: &[Vec<S>], forms: &[DiffForm<S>]) -> Vec<DiffForm<S>> {
    m.iter()
        .map(|row| {
            let mut acc = DiffForm::zero(forms[0].chart(), forms[0].degree());
            for (c, w) in row.iter().zip(forms) {
                if !c.is_zero() {
                    acc = acc.add(&w.mul_scalar(c));
                }
            }
            acc
        })
        .collect()
}

pub fn differential<I: IntegralScalar>(f: &I, chart: &VarSet) -> DiffForm<I::Coeff> {
    DiffForm::from_components(chart, (0..chart.len()).map(|v| f.diff(v)).collect())
}

/// One level of the reduction. Returns the potential, the factor and the
/// `m - 1` transformed forms.
#[allow(clippy::type_complexity)]
pub fn reduce_step<S: Scalar>(
    forms: &[DiffForm<S>],
    chain: &AdaptedChain,
    s: usize,
    basepoint: &[Rational],
) -> Result<(S::Integral, Vec<Vec<S>>, Vec<DiffForm<S>>)> {
    let m = chain.dim() - s;
    if forms.len() != m {
        return Err(Error::InvalidArgument(format!("level {s} expects {m} forms, got {}", forms.len())));
    }
    residual_level(forms, chain, s)?;
    let f = crate::forms::potential(&forms[m - 1], basepoint)?;
    let a = &chain.restricted[s];
    let chart = forms[0].chart().clone();
    let factor = factor_for::<S>(&f, a, &chart, false)?;
    let hat = apply_scalar_matrix(&factor[..m - 1], forms);
    Ok((f, factor, hat))
}

/// Full (or, with `stop_after`, partial) reduction with every potential
/// vanishing at `basepoint`.
pub fn reduce_full<S: Scalar>(
    forms: &[DiffForm<S>],
    chain: &AdaptedChain,
    basepoint: &[Rational],
    stop_after: Option<usize>,
) -> Result<ReductionTrace<S>> {
    let n = chain.dim();
    if forms.len() != n {
        return Err(Error::InvalidArgument(format!("expected {n} forms, got {}", forms.len())));
    }
    let chart = forms[0].chart().clone();
    for w in forms {
        chart.check_same(w.chart())?;
        if w.degree() != 1 {
            return Err(Error::InvalidArgument("reduction needs 1-forms".into()));
        }
    }
    let r = stop_after.unwrap_or(n).min(n);
    let mut current = forms.to_vec();
    let mut steps = Vec::with_capacity(r);
    for s in 0..r {
        let (f, factor, hat) = reduce_step(&current, chain, s, basepoint)?;
        steps.push(ReductionStep { level: s, function: f, generator: chain.restricted[s].clone(), factor });
        current = hat;
    }
    if r < n {
        residual_level(&current, chain, r)?;
    }
    Ok(ReductionTrace { chain: chain.clone(), chart, basepoint: basepoint.to_vec(), input: forms.to_vec(), steps, remaining: current })
}

impl<S: Scalar> ReductionTrace<S> {
    pub fn is_complete(&self) -> bool {
        self.steps.len() == self.chain.dim()
    }

    /// `f^1 .. f^k` for the levels reached, in one-based index order.
    pub fn functions(&self) -> Vec<S::Integral> {
        self.steps.iter().rev().map(|s| s.function.clone()).collect()
    }

    /// Rebuild the input from the exact differentials by inverse factors.
    pub fn reassemble(&self) -> Result<Vec<DiffForm<S>>> {
        let mut cur = self.remaining.clone();
        for step in self.steps.iter().rev() {
            cur.push(differential(&step.function, &self.chart));
            let inv = factor_for::<S>(&step.function, &step.generator, &self.chart, true)?;
            cur = apply_scalar_matrix(&inv, &cur);
        }
        Ok(cur)
    }

    pub fn reassembly_holds(&self) -> Result<bool> {
        let back = self.reassemble()?;
        Ok(back.iter().zip(&self.input).all(|(a, b)| a.sub(b).is_zero()))
    }

    /// Every potential vanishes at the basepoint.
    pub fn basepoint_values(&self) -> Result<Vec<f64>> {
        let p: Vec<f64> = self.basepoint.iter().map(crate::scalars::rat_to_f64).collect();
        self.steps.iter().map(|s| s.function.evaluate(&p)).collect()
    }

    /// Check that each step factor is an automorphism of its ideal:
    /// `E[u, v] = [E u, E v]` at random points and vectors.
    pub fn automorphism_check(&self, domain: &Domain, samples: usize, seed: u64, tol: f64) -> NumericCheck {
        let points = domain.sample(samples, seed);
        let errs = par_map(&points, |p| {
            let mut e: f64 = 0.0;
            for step in &self.steps {
                let m = step.factor.len();
                let c = self.chain.ideal_constants(step.level);
                let Ok(vals) = step
                    .factor
                    .iter()
                    .map(|row| row.iter().map(|x| x.evaluate(p)).collect::<Result<Vec<f64>>>())
                    .collect::<Result<Vec<_>>>()
                else {
                    return f64::NAN;
                };
                let em = DMatrix::from_fn(m, m, |i, j| vals[i][j]);
                let vs = crate::sampling::random_vectors(m, 2, seed.wrapping_add(step.level as u64));
                let apply = |v: &[f64]| -> Vec<f64> { (&em * DMatrix::from_column_slice(m, 1, v)).iter().copied().collect() };
                let lhs = apply(&c.bracket_f64(&vs[0], &vs[1]));
                let rhs = c.bracket_f64(&apply(&vs[0]), &apply(&vs[1]));
                for (a, b) in lhs.iter().zip(&rhs) {
                    e = e.max(rel_diff(*a, *b));
                }
            }
            e
        });
        NumericCheck::numeric(samples, worst(errs), tol)
    }

    pub fn to_json(&self) -> TraceJson {
        let n = self.chain.dim();
        TraceJson {
            chart: self.chart.names().to_vec(),
            complete: self.is_complete(),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    level: s.level,
                    index: n - s.level,
                    function: s.function.to_text(),
                    generator: s.generator.to_strings(),
                    factor: s.factor.iter().map(|r| r.iter().map(|x| x.to_text()).collect()).collect(),
                })
                .collect(),
            functions: self.functions().iter().map(|f| f.to_text()).collect(),
            remaining: self.remaining.iter().map(|w| w.to_text()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, serde::Deserialize, PartialEq)]
pub struct StepJson {
    pub level: usize,
    pub index: usize,
    pub function: String,
    pub generator: Vec<Vec<String>>,
    pub factor: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, serde::Deserialize, PartialEq)]
pub struct TraceJson {
    pub chart: Vec<String>,
    pub complete: bool,
    pub steps: Vec<StepJson>,
    pub functions: Vec<String>,
    pub remaining: Vec<String>,
}

/// `ρ = (f^1, …, f^n)` into `target`; needs a complete, logarithm-free trace.
pub fn rho_map<S: Scalar>(trace: &ReductionTrace<S>, target: &VarSet) -> Result<PointMap<S>> {
    if !trace.is_complete() {
        return Err(Error::InvalidArgument("reduction stopped early; ρ needs all functions".into()));
    }
    let comps = trace
        .functions()
        .iter()
        .map(|f| {
            f.to_coeff()
                .ok_or_else(|| Error::NonElementaryInClass(format!("{} leaves the coefficient class", f.to_text())))
        })
        .collect::<Result<Vec<S>>>()?;
    PointMap::new(target, comps)
}

/// Check `ρ* τ^i = ω^i`, symbolically when composition stays in the class.
pub fn verify_rho<S: Scalar>(
    trace: &ReductionTrace<S>,
    tau: &[DiffForm<S>],
    mode: VerifyMode,
    domain: &Domain,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<NumericCheck> {
    if !trace.is_complete() {
        return Err(Error::InvalidArgument("reduction stopped early; ρ needs all functions".into()));
    }
    let target = tau[0].chart().clone();
    if mode != VerifyMode::Numeric {
        let symbolic = rho_map(trace, &target).and_then(|rho| {
            let mut ok = true;
            for (t, w) in tau.iter().zip(&trace.input) {
                ok &= t.pullback(&rho)?.sub(w).is_zero();
            }
            Ok(ok)
        });
        match symbolic {
            Ok(ok) => return Ok(NumericCheck::symbolic(ok)),
            Err(e) if mode == VerifyMode::Symbolic => return Err(e),
            Err(_) => {}
        }
    }
    let map = SymbolicMap::from_integrals(&trace.functions(), trace.chart.len());
    Ok(pullback_numeric(&map as &dyn NumericMap, tau, &trace.input, domain, samples, seed, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::StructureConstants;
    use crate::scalars::{ExpPoly, RationalFunction};
    use num::Zero;

    #[test]
    fn abelian_reduction_is_coordinates() {
        let chart = VarSet::numbered("x", 3);
        let chain = AdaptedChain::from_adapted(StructureConstants::abelian(3)).unwrap();
        let forms: Vec<DiffForm<ExpPoly>> = (0..3).map(|i| DiffForm::dx(&chart, i)).collect();
        let t = reduce_full(&forms, &chain, &[Rational::zero(), Rational::zero(), Rational::zero()], None).unwrap();
        for (i, f) in t.functions().iter().enumerate() {
            assert!(f.sub(&ExpPoly::var(&chart, i)).is_zero());
        }
        assert!(t.reassembly_holds().unwrap());
    }

    #[test]
    fn wrong_constants_are_caught() {
        let chart = VarSet::numbered("x", 3);
        let h = StructureConstants::from_table(3, &[(1, 2, &[(0, Rational::from_integer(1.into()))])]);
        let chain = AdaptedChain::from_adapted(h).unwrap();
        let forms: Vec<DiffForm<RationalFunction>> = (0..3).map(|i| DiffForm::dx(&chart, i)).collect();
        let err = reduce_full(&forms, &chain, &[Rational::zero(), Rational::zero(), Rational::zero()], None);
        assert!(matches!(err, Err(Error::ResidualNonzero { level: 0, .. })));
    }
}

//! Left-invariant coframes and frames on ℝⁿ, the adjoint representation and
//! the group law of the simply connected group, all in coordinates of the
//! second kind attached to an adapted chain.

use nalgebra::DMatrix;
use num::Zero;
use serde::Serialize;

use crate::config::VerifyMode;
use crate::error::{Error, Result};
use crate::forms::{pullback_numeric, structure_residual, DiffForm, NumericCheck, PointMap, SymbolicMap, VectorField};
use crate::liealg::AdaptedChain;
use crate::linalg::RatMatrix;
use crate::matexp::sym_exp;
use crate::reduction::{reduce_full, ReductionTrace};
use crate::sampling::{max_rel_diff, par_map, worst, Domain};
use crate::scalars::{ExpPoly, Rational, VarSet};

pub type ExpMat = Vec<Vec<ExpPoly>>;

pub fn mat_identity(chart: &VarSet, n: usize) -> ExpMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { ExpPoly::one(chart) } else { ExpPoly::zero(chart) }).collect()).collect()
}

pub fn mat_mul(a: &ExpMat, b: &ExpMat) -> ExpMat {
    let chart = a[0][0].chart().clone();
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = ExpPoly::zero(&chart);
                    for t in 0..k {
                        if !a[i][t].is_zero() && !b[t][j].is_zero() {
                            acc = acc.add(&a[i][t].mul(&b[t][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_eval(a: &ExpMat, p: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(a.len(), a[0].len(), |i, j| a[i][j].evaluate(p))
}

fn mat_embed(a: &ExpMat, target: &VarSet, map: &[usize]) -> ExpMat {
    a.iter().map(|r| r.iter().map(|x| x.embed(target, map)).collect()).collect()
}

/// `blockdiag(exp(t A), I)` of size `n`, with `t` a scalar on the chart.
fn block_exp(a: &RatMatrix, t: &ExpPoly, n: usize) -> Result<ExpMat> {
    let chart = t.chart().clone();
    let mut out = mat_identity(&chart, n);
    if a.is_zero() {
        return Ok(out);
    }
    let e = sym_exp(a, "t")?.at(t)?;
    for (i, row) in e.into_iter().enumerate() {
        for (j, x) in row.into_iter().enumerate() {
            out[i][j] = x;
        }
    }
    Ok(out)
}

/// The simply connected group of an adapted chain, realized on ℝⁿ.
#[derive(Clone, Debug)]
pub struct SolvGroup {
    pub chain: AdaptedChain,
    pub chart: VarSet,
    /// `τ = M dx`
    pub coframe_matrix: ExpMat,
    pub coframe: Vec<DiffForm<ExpPoly>>,
    /// `X_j = Σ_k (M⁻¹)_{kj} ∂_k`
    pub frame: Vec<VectorField<ExpPoly>>,
}

impl SolvGroup {
    pub fn new(chain: &AdaptedChain) -> Result<Self> {
        let n = chain.dim();
        let chart = VarSet::numbered("x", n);
        let mut m = mat_identity(&chart, n);
        let mut minv = mat_identity(&chart, n);
        // M = B_n ··· B_1 with B_k = blockdiag(exp(-x_k ad_{n-k}(e_k)), I)
        for k in 1..=n {
            let a = &chain.restricted[n - k];
            let x = ExpPoly::var(&chart, k - 1);
            m = mat_mul(&block_exp(a, &x.neg(), n)?, &m);
            minv = mat_mul(&minv, &block_exp(a, &x, n)?);
        }
        let coframe = m.iter().map(|row| DiffForm::from_components(&chart, row.clone())).collect();
        let frame = (0..n).map(|j| VectorField::new(&chart, (0..n).map(|k| minv[k][j].clone()).collect())).collect();
        Ok(SolvGroup { chain: chain.clone(), chart, coframe_matrix: m, coframe, frame })
    }

    pub fn dim(&self) -> usize {
        self.chain.dim()
    }

    /// `Ad(x) = exp(x_1 ad e_1) ··· exp(x_n ad e_n)`
    pub fn ad_rep(&self) -> Result<ExpMat> {
        let n = self.dim();
        let mut out = mat_identity(&self.chart, n);
        for k in 0..n {
            let e = block_exp(&self.chain.base.ad_matrix(k), &ExpPoly::var(&self.chart, k), n)?;
            out = mat_mul(&out, &e);
        }
        Ok(out)
    }

    /// `Ad(x⁻¹) = exp(-x_n ad e_n) ··· exp(-x_1 ad e_1)`
    pub fn ad_inverse_rep(&self) -> Result<ExpMat> {
        let n = self.dim();
        let mut out = mat_identity(&self.chart, n);
        for k in (0..n).rev() {
            let e = block_exp(&self.chain.base.ad_matrix(k), &ExpPoly::var(&self.chart, k).neg(), n)?;
            out = mat_mul(&out, &e);
        }
        Ok(out)
    }

    /// `dτ + ½ C τ∧τ`, which must vanish.
    pub fn coframe_residual(&self) -> Vec<DiffForm<ExpPoly>> {
        structure_residual(&self.coframe, &self.chain.base)
    }

    /// `⟨τ^i, X_j⟩ = δ^i_j`
    pub fn duality_holds(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let mut acc = ExpPoly::zero(&self.chart);
                for k in 0..n {
                    acc = acc.add(&self.coframe_matrix[i][k].mul(&self.frame[j].components()[k]));
                }
                let want = if i == j { ExpPoly::one(&self.chart) } else { ExpPoly::zero(&self.chart) };
                acc.sub(&want).is_zero()
            })
        })
    }

    /// `[X_i, X_j] - C^k_{ij} X_k` at sampled points.
    pub fn frame_bracket_check(&self, domain: &Domain, samples: usize, seed: u64, tol: f64) -> Result<NumericCheck> {
        let n = self.dim();
        let mut residuals = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut r = self.frame[i].lie_bracket(&self.frame[j])?;
                for k in 0..n {
                    let c = self.chain.base.get(k, i, j);
                    if !c.is_zero() {
                        r = r.sub(&self.frame[k].scale(c));
                    }
                }
                residuals.push(r);
            }
        }
        let points = domain.sample(samples, seed);
        let errs = par_map(&points, |p| {
            residuals
                .iter()
                .flat_map(|r| r.evaluate(p).unwrap_or_else(|_| vec![f64::NAN]))
                .fold(0.0f64, |m, x| if x.is_nan() { f64::INFINITY } else { m.max(x.abs()) })
        });
        Ok(NumericCheck::numeric(samples, worst(errs), tol))
    }

    /// Determinant of the coframe matrix at sampled points; all must be nonzero.
    pub fn coframe_det_min(&self, domain: &Domain, samples: usize, seed: u64) -> f64 {
        let points = domain.sample(samples, seed);
        par_map(&points, |p| mat_eval(&self.coframe_matrix, p).determinant().abs()).into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Doubled chart `x1..xn, y1..yn` with the two projections' index maps.
    pub fn doubled_chart(&self) -> (VarSet, Vec<usize>, Vec<usize>) {
        let n = self.dim();
        let xy = self.chart.concat(&VarSet::numbered("y", n)).expect("distinct names");
        (xy, (0..n).collect(), (n..2 * n).collect())
    }
}

/// The group law `μ(x, y)` together with the data it was built from.
#[derive(Clone, Debug)]
pub struct GroupLaw {
    pub doubled: VarSet,
    pub target: VarSet,
    pub mu: PointMap<ExpPoly>,
    /// `Ad(x)` over the group chart.
    pub ad: ExpMat,
    pub omega: Vec<DiffForm<ExpPoly>>,
    pub trace: ReductionTrace<ExpPoly>,
    jac_y: Vec<Vec<ExpPoly>>,
}

/// Build `ω = Ad(y⁻¹) π₁*τ + π₂*τ` on the doubled chart and reduce it.
pub fn multiplication(group: &SolvGroup) -> Result<GroupLaw> {
    let n = group.dim();
    let (xy, px, py) = group.doubled_chart();
    let ad_inv_y = mat_embed(&group.ad_inverse_rep()?, &xy, &py);
    let tau_x: Vec<_> = group.coframe.iter().map(|t| t.embed(&xy, &px)).collect();
    let tau_y: Vec<_> = group.coframe.iter().map(|t| t.embed(&xy, &py)).collect();
    let omega: Vec<DiffForm<ExpPoly>> = (0..n)
        .map(|i| {
            let mut acc = tau_y[i].clone();
            for j in 0..n {
                if !ad_inv_y[i][j].is_zero() {
                    acc = acc.add(&tau_x[j].mul_scalar(&ad_inv_y[i][j]));
                }
            }
            acc
        })
        .collect();
    let trace = reduce_full(&omega, &group.chain, &vec![Rational::zero(); 2 * n], None)?;
    let target = VarSet::numbered("z", n);
    let mu = PointMap::new(&target, trace.functions())?;
    let jac_y = mu.comps.iter().map(|c| (0..n).map(|j| c.diff(n + j)).collect()).collect();
    Ok(GroupLaw { doubled: xy, target, mu, ad: group.ad_rep()?, omega, trace, jac_y })
}

impl GroupLaw {
    pub fn dim(&self) -> usize {
        self.target.len()
    }

    pub fn apply(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let p: Vec<f64> = x.iter().chain(y).copied().collect();
        self.mu.comps.iter().map(|c| c.evaluate(&p)).collect()
    }

    /// `∂μ(x, y)/∂y`
    pub fn jacobian_y(&self, x: &[f64], y: &[f64]) -> DMatrix<f64> {
        let p: Vec<f64> = x.iter().chain(y).copied().collect();
        mat_eval(&self.jac_y, &p)
    }

    pub fn ad_at(&self, x: &[f64]) -> DMatrix<f64> {
        mat_eval(&self.ad, x)
    }

    /// `y` with `μ(x, y) = 0`, by Newton iteration from `-x`.
    pub fn inverse_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        let mut y: Vec<f64> = x.iter().map(|v| -v).collect();
        for _ in 0..100 {
            let r = self.apply(x, &y);
            let norm = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if norm <= 1e-12 {
                return Ok(y);
            }
            let j = self.jacobian_y(x, &y);
            let step = j
                .lu()
                .solve(&DMatrix::from_column_slice(n, 1, &r))
                .ok_or_else(|| Error::NonConvergence("singular Jacobian".into()))?;
            for (yi, si) in y.iter_mut().zip(step.iter()) {
                *yi -= si;
            }
        }
        let r = self.apply(x, &y);
        if r.iter().all(|v| v.abs() <= 1e-10) {
            Ok(y)
        } else {
            Err(Error::NonConvergence(format!("residual {:?} after 100 iterations", r)))
        }
    }

    pub fn to_json(&self) -> GroupLawJson {
        GroupLawJson {
            source: self.doubled.names().to_vec(),
            target: self.target.names().to_vec(),
            mu: self.mu.comps.iter().map(|c| c.to_text()).collect(),
            ad: self.ad.iter().map(|r| r.iter().map(|x| x.to_text()).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, serde::Deserialize, PartialEq)]
pub struct GroupLawJson {
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub mu: Vec<String>,
    pub ad: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub associativity: NumericCheck,
    pub identity: NumericCheck,
    pub ad_homomorphism: NumericCheck,
    pub left_invariance: NumericCheck,
    pub pullback: NumericCheck,
    pub pass: bool,
}

/// Group axioms and invariance properties at seeded random points.
pub fn verify_group(law: &GroupLaw, group: &SolvGroup, mode: VerifyMode, samples: usize, seed: u64, tol: f64) -> Result<GroupReport> {
    let n = law.dim();
    let domain = Domain::cube(3 * n, 1.0);
    let triples = domain.sample(samples, seed);
    let split = |t: &Vec<f64>| (t[..n].to_vec(), t[n..2 * n].to_vec(), t[2 * n..].to_vec());

    let assoc = par_map(&triples, |t| {
        let (x, y, z) = split(t);
        max_rel_diff(&law.apply(&x, &law.apply(&y, &z)), &law.apply(&law.apply(&x, &y), &z))
    });
    let zero = vec![0.0; n];
    let ident = par_map(&triples, |t| {
        let (x, y, _) = split(t);
        max_rel_diff(&law.apply(&zero, &y), &y).max(max_rel_diff(&law.apply(&x, &zero), &x))
    });
    let adh = par_map(&triples, |t| {
        let (x, y, _) = split(t);
        let lhs = law.ad_at(&law.apply(&x, &y));
        let rhs = law.ad_at(&x) * law.ad_at(&y);
        max_rel_diff(lhs.as_slice(), rhs.as_slice())
    });
    let left = par_map(&triples, |t| {
        let (a, y, _) = split(t);
        let j = law.jacobian_y(&a, &y);
        let ay = law.apply(&a, &y);
        let mut e: f64 = 0.0;
        for xf in &group.frame {
            let Ok(at_y) = xf.evaluate(&y) else { return f64::NAN };
            let Ok(at_ay) = xf.evaluate(&ay) else { return f64::NAN };
            let pushed = &j * DMatrix::from_column_slice(n, 1, &at_y);
            e = e.max(max_rel_diff(pushed.as_slice(), &at_ay));
        }
        e
    });

    let z_tau: Vec<DiffForm<ExpPoly>> = group.coframe.iter().map(|t| t.embed(&law.target, &(0..n).collect::<Vec<_>>())).collect();
    let mut pullback = None;
    if mode != VerifyMode::Numeric {
        let symbolic: Result<bool> = z_tau
            .iter()
            .zip(&law.omega)
            .try_fold(true, |ok, (t, w)| Ok(ok && t.pullback(&law.mu)?.sub(w).is_zero()));
        match symbolic {
            Ok(ok) => pullback = Some(NumericCheck::symbolic(ok)),
            Err(e) if mode == VerifyMode::Symbolic => return Err(e),
            Err(_) => {}
        }
    }
    let pullback = match pullback {
        Some(p) => p,
        None => {
            let map = SymbolicMap::from_point_map(&law.mu);
            pullback_numeric(&map, &z_tau, &law.omega, &Domain::cube(2 * n, 1.0), samples, seed, tol)
        }
    };

    let associativity = NumericCheck::numeric(samples, worst(assoc), tol);
    let identity = NumericCheck::numeric(samples, worst(ident), tol);
    let ad_homomorphism = NumericCheck::numeric(samples, worst(adh), tol);
    let left_invariance = NumericCheck::numeric(samples, worst(left), tol);
    let pass = associativity.pass && identity.pass && ad_homomorphism.pass && left_invariance.pass && pullback.pass;
    Ok(GroupReport { associativity, identity, ad_homomorphism, left_invariance, pullback, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct PreAdjointReport {
    /// The structure equations of `θ̃` hold.
    pub residual_zero: bool,
    /// `ρ(x, y)` against `μ(y, x⁻¹)`.
    pub agreement: NumericCheck,
    pub rho: Vec<String>,
    pub pass: bool,
}

/// Independent route to the group law: reduce
/// `θ̃ = Ad(x)(π₂*τ - π₁*τ)` and compare the resulting `ρ(x, y) = y x⁻¹`
/// with `μ(y, x⁻¹)`.
pub fn preadjoint_oracle(group: &SolvGroup, law: &GroupLaw, samples: usize, seed: u64, tol: f64) -> Result<PreAdjointReport> {
    let n = group.dim();
    let (xy, px, py) = group.doubled_chart();
    let ad_x = mat_embed(&group.ad_rep()?, &xy, &px);
    let diff: Vec<DiffForm<ExpPoly>> =
        group.coframe.iter().map(|t| t.embed(&xy, &py).sub(&t.embed(&xy, &px))).collect();
    let theta: Vec<DiffForm<ExpPoly>> = (0..n)
        .map(|i| {
            let mut acc = DiffForm::zero(&xy, 1);
            for j in 0..n {
                if !ad_x[i][j].is_zero() {
                    acc = acc.add(&diff[j].mul_scalar(&ad_x[i][j]));
                }
            }
            acc
        })
        .collect();
    let residual_zero = structure_residual(&theta, &group.chain.base).iter().all(|r| r.is_zero());
    let trace = reduce_full(&theta, &group.chain, &vec![Rational::zero(); 2 * n], None)?;
    let rho = trace.functions();
    let pairs = Domain::cube(2 * n, 1.0).sample(samples, seed);
    let errs = par_map(&pairs, |p| {
        let (x, y) = (&p[..n], &p[n..]);
        let Ok(xinv) = law.inverse_at(x) else { return f64::NAN };
        let want = law.apply(y, &xinv);
        let got: Vec<f64> = rho.iter().map(|f| f.evaluate(p)).collect();
        max_rel_diff(&got, &want)
    });
    let agreement = NumericCheck::numeric(samples, worst(errs), tol);
    Ok(PreAdjointReport {
        residual_zero,
        pass: residual_zero && agreement.pass,
        agreement,
        rho: rho.iter().map(|f| f.to_text()).collect(),
    })
}

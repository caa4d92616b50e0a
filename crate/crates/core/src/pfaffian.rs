//! First integrals of Pfaffian systems with a transverse solvable symmetry
//! algebra, over rational-function coefficients.

use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{structure_residual, DiffForm, VectorField};
use crate::liealg::{transform_forms, AdaptedChain, BasisChange, StructureConstants};
use crate::linalg::RatMatrix;
use crate::reduction::{differential, reduce_full, ReductionTrace};
use crate::sampling::Domain;
use crate::scalars::{f64_to_rat, rat_to_f64, LogExtendedScalar, Poly, Rational, RationalFunction, VarSet};

type RF = RationalFunction;
pub type RfMatrix = Vec<Vec<RF>>;

/// Generators `θ` on a chart minus excluded hypersurfaces.
#[derive(Clone, Debug)]
pub struct PfaffianSystem {
    pub chart: VarSet,
    pub excluded: Vec<Poly>,
    pub theta: Vec<DiffForm<RF>>,
}

/// Vector fields `Z_j` with `[Z_j, Z_k] = C^i_{jk} Z_i`.
#[derive(Clone, Debug)]
pub struct SymmetryAlgebra {
    pub fields: Vec<VectorField<RF>>,
    pub constants: StructureConstants,
}

impl SymmetryAlgebra {
    /// First `(j, k)` pair (one-based) whose bracket disagrees with the constants.
    pub fn bracket_mismatch(&self) -> Result<Option<(usize, usize)>> {
        let n = self.fields.len();
        for j in 0..n {
            for k in j + 1..n {
                let mut r = self.fields[j].lie_bracket(&self.fields[k])?;
                for i in 0..n {
                    let c = self.constants.get(i, j, k);
                    if !c.is_zero() {
                        r = r.sub(&self.fields[i].scale(c));
                    }
                }
                if !r.is_zero() {
                    return Ok(Some((j + 1, k + 1)));
                }
            }
        }
        Ok(None)
    }
}

fn rf_identity(chart: &VarSet, n: usize) -> RfMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { RF::one(chart) } else { RF::zero(chart) }).collect()).collect()
}

/// Determinant over the field of rational functions.
pub fn rf_det(m: &RfMatrix, chart: &VarSet) -> RF {
    let n = m.len();
    let mut a = m.clone();
    let mut det = RF::one(chart);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return RF::zero(chart) };
        if p != c {
            a.swap(p, c);
            det = det.neg();
        }
        det = det.mul(&a[c][c]);
        let inv = a[c][c].recip().expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for j in c..n {
                a[i][j] = a[i][j].sub(&f.mul(&a[c][j]));
            }
        }
    }
    det
}

pub fn rf_inverse(m: &RfMatrix, chart: &VarSet) -> Result<RfMatrix> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv = rf_identity(chart, n);
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero()).ok_or(Error::DegenerateTransversality)?;
        a.swap(p, c);
        inv.swap(p, c);
        let r = a[c][c].recip()?;
        for j in 0..n {
            a[c][j] = a[c][j].mul(&r);
            inv[c][j] = inv[c][j].mul(&r);
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..n {
                a[i][j] = a[i][j].sub(&f.mul(&a[c][j]));
                inv[i][j] = inv[i][j].sub(&f.mul(&inv[c][j]));
            }
        }
    }
    Ok(inv)
}

/// `P^i_j = θ^i(Z_j)` and `det P`.
pub fn transversality(theta: &[DiffForm<RF>], z: &[VectorField<RF>]) -> Result<(RfMatrix, RF)> {
    if theta.len() != z.len() || theta.is_empty() {
        return Err(Error::InvalidArgument(format!("{} forms against {} vector fields", theta.len(), z.len())));
    }
    let chart = theta[0].chart().clone();
    let p: RfMatrix = theta
        .iter()
        .map(|t| z.iter().map(|x| Ok(t.interior(x)?.as_function())).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let det = rf_det(&p, &chart);
    if det.is_zero() {
        return Err(Error::DegenerateTransversality);
    }
    Ok((p, det))
}

/// `ω = P⁻¹ θ`
pub fn normalize(theta: &[DiffForm<RF>], z: &[VectorField<RF>]) -> Result<Vec<DiffForm<RF>>> {
    let (p, _) = transversality(theta, z)?;
    let pinv = rf_inverse(&p, theta[0].chart())?;
    Ok(crate::reduction::apply_scalar_matrix(&pinv, theta))
}

#[derive(Clone, Debug)]
pub struct FirstIntegrals {
    pub change: BasisChange,
    /// Normalized forms in the input basis of the symmetry algebra.
    pub omega: Vec<DiffForm<RF>>,
    pub trace: ReductionTrace<RF>,
    /// `f^1 .. f^n`
    pub functions: Vec<LogExtendedScalar>,
    /// Hypersurfaces to avoid: the excluded set, `det P`, and coefficient poles.
    pub singular: Vec<Poly>,
}

pub fn first_integrals(sys: &PfaffianSystem, sym: &SymmetryAlgebra, basepoint: &[Rational]) -> Result<FirstIntegrals> {
    if let Some((j, k)) = sym.bracket_mismatch()? {
        return Err(Error::InvalidArgument(format!("[Z{j}, Z{k}] does not match the structure constants")));
    }
    let (p, det) = transversality(&sys.theta, &sym.fields)?;
    let omega = crate::reduction::apply_scalar_matrix(&rf_inverse(&p, &sys.chart)?, &sys.theta);
    if structure_residual(&omega, &sym.constants).iter().any(|r| !r.is_zero()) {
        return Err(Error::ResidualNonzero { level: 0, detail: "normalized forms fail the structure equations".into() });
    }
    let (change, chain) = sym.constants.adapted_chain()?;
    let adapted = transform_forms(&change, &omega);
    let trace = reduce_full(&adapted, &chain, basepoint, None)?;
    let functions = trace.functions();
    let mut singular = sys.excluded.clone();
    singular.push(det.numer().clone());
    singular.push(det.denom().clone());
    for w in &omega {
        for (_, c) in w.terms() {
            singular.push(c.denom().clone());
        }
    }
    singular.retain(|q| !q.is_constant());
    singular.sort_by_key(|q| format!("{q:?}"));
    singular.dedup_by(|a, b| a == b);
    Ok(FirstIntegrals { change, omega, trace, functions, singular })
}

impl FirstIntegrals {
    pub fn chain(&self) -> &AdaptedChain {
        &self.trace.chain
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralReport {
    /// Each `df^i` equals `Σ c_ij θ^j` with rational `c_ij` exactly.
    pub membership_exact: bool,
    /// `df^1 ∧ … ∧ df^n` is not identically zero.
    pub independent_symbolic: bool,
    pub independence_samples: usize,
    pub independent_at_samples: bool,
    /// `df^i(Y) = 0` exactly for `Y` in the kernel of `θ` at rational sample points.
    pub level_sets_exact: bool,
    pub level_set_samples: usize,
    pub pass: bool,
}

/// Coefficients `c` with `df = Σ_j c_j θ^j`, or `None` if `df` leaves the span.
pub fn membership(df: &DiffForm<RF>, theta: &[DiffForm<RF>], z: &[VectorField<RF>]) -> Result<Option<Vec<RF>>> {
    let (p, _) = transversality(theta, z)?;
    let chart = df.chart().clone();
    let pinv = rf_inverse(&p, &chart)?;
    // df(Z_k) = Σ_j c_j P^j_k, so c = P^{-T} df(Z)
    let dz: Vec<RF> = z.iter().map(|x| Ok(df.interior(x)?.as_function())).collect::<Result<_>>()?;
    let c: Vec<RF> = (0..theta.len())
        .map(|j| {
            let mut acc = RF::zero(&chart);
            for (k, v) in dz.iter().enumerate() {
                acc = acc.add(&pinv[k][j].mul(v));
            }
            acc
        })
        .collect();
    let mut r = df.clone();
    for (cj, t) in c.iter().zip(theta) {
        r = r.sub(&t.mul_scalar(cj));
    }
    Ok(if r.is_zero() { Some(c) } else { None })
}

pub fn verify_integrals(
    fi: &FirstIntegrals,
    sys: &PfaffianSystem,
    sym: &SymmetryAlgebra,
    center: &[f64],
    samples: usize,
    seed: u64,
) -> Result<IntegralReport> {
    let chart = &sys.chart;
    let dfs: Vec<DiffForm<RF>> = fi.functions.iter().map(|f| differential(f, chart)).collect();
    let mut membership_exact = true;
    for df in &dfs {
        membership_exact &= membership(df, &sys.theta, &sym.fields)?.is_some();
    }
    let wedge = dfs.iter().skip(1).fold(dfs[0].clone(), |acc, d| acc.wedge(d));
    let independent_symbolic = !wedge.is_zero();
    let domain = Domain::around(center.to_vec(), 0.5).excluding(fi.singular.clone(), 1e-3);
    let points = domain.sample(samples, seed);
    let independent_at_samples = points.iter().all(|p| {
        wedge.terms().any(|(_, c)| c.evaluate(p).map(|v| v.abs() > 1e-12).unwrap_or(false))
    });

    let mut level_sets_exact = true;
    for p in &points {
        let q: Vec<Rational> = p.iter().map(|x| f64_to_rat((x * 1024.0).round() / 1024.0).unwrap()).collect();
        let Ok(rows) = sys
            .theta
            .iter()
            .map(|t| t.components().iter().map(|c| c.evaluate_exact(&q)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
        else {
            continue;
        };
        let kernel = RatMatrix::from_rows(rows).nullspace();
        for df in &dfs {
            let Ok(coeffs) = df.components().iter().map(|c| c.evaluate_exact(&q)).collect::<Result<Vec<_>>>() else {
                continue;
            };
            for y in &kernel {
                let s = coeffs.iter().zip(y).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
                level_sets_exact &= s.is_zero();
            }
        }
    }
    let pass = membership_exact && independent_symbolic && independent_at_samples && level_sets_exact;
    Ok(IntegralReport {
        membership_exact,
        independent_symbolic,
        independence_samples: points.len(),
        independent_at_samples,
        level_sets_exact,
        level_set_samples: points.len(),
        pass,
    })
}

/// Numeric center of the sampling box: the basepoint.
pub fn basepoint_f64(bp: &[Rational]) -> Vec<f64> {
    bp.iter().map(rat_to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::expr::parse_rational;

    #[test]
    fn identity_pairing() {
        let c = VarSet::numbered("x", 2);
        let theta: Vec<DiffForm<RF>> = (0..2).map(|i| DiffForm::dx(&c, i)).collect();
        let z: Vec<VectorField<RF>> = (0..2).map(|i| VectorField::coordinate(&c, i)).collect();
        assert_eq!(normalize(&theta, &z).unwrap(), theta);
    }

    #[test]
    fn degenerate_pairing() {
        let c = VarSet::numbered("x", 2);
        let theta: Vec<DiffForm<RF>> = (0..2).map(|i| DiffForm::dx(&c, i)).collect();
        let z1 = VectorField::<RF>::coordinate(&c, 0);
        let z2 = z1.mul_scalar(&parse_rational("x2", &c).unwrap());
        assert!(matches!(transversality(&theta, &[z1, z2]), Err(Error::DegenerateTransversality)));
    }
}

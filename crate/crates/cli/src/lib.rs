//! Command implementations behind the `solvlie` binary.
//!
//! Every command returns a JSON report with a top-level `pass` flag; the
//! binary maps it to the exit status.

use std::path::Path;

use serde_json::{json, Value};

use solvlie::config::{RunConfig, VerifyMode};
use solvlie::error::{Error, Result};
use solvlie::forms::{DiffForm, NumericCheck};
use solvlie::io::{forms_are_rational, forms_from_json, read_json, FormJson, ParseScalar, PfaffianJson, VectorFieldJson};
use solvlie::liealg::{transform_forms, AdaptedChain, AlgebraJson, BasisChange, StructureConstants};
use solvlie::liegroup::{multiplication, preadjoint_oracle, verify_group, SolvGroup};
use solvlie::pfaffian::{basepoint_f64, first_integrals, verify_integrals, PfaffianSystem, SymmetryAlgebra};
use solvlie::reduction::{reduce_full, verify_rho, ReductionTrace};
use solvlie::sampling::Domain;
use solvlie::scalars::{rat_to_f64, ExpPoly, Rational, RationalFunction, Scalar};

/// Report plus overall verdict.
pub struct Outcome {
    pub report: Value,
    pub pass: bool,
}

pub fn error_json(e: &Error) -> Value {
    json!({ "error": { "code": e.code(), "message": e.to_string() } })
}

fn load_algebra(path: &Path) -> Result<StructureConstants> {
    let a: AlgebraJson = read_json(path)?;
    a.to_constants()
}

fn chain_summary(p: &BasisChange, chain: &AdaptedChain) -> Value {
    json!({
        "basis_change": p.p.to_strings(),
        "identity": p.is_identity(),
        "derived_dims": chain.derived_dims,
        "restricted": chain.restricted.iter().map(|m| m.to_strings()).collect::<Vec<_>>(),
    })
}

fn check_json(c: &NumericCheck) -> Value {
    serde_json::to_value(c).expect("serializable")
}

pub fn cmd_validate(algebra: &Path, _cfg: &RunConfig) -> Result<Outcome> {
    let c = load_algebra(algebra)?;
    let v = c.validate();
    let solvable = v.valid && c.is_solvable();
    let chain = if solvable {
        let (p, chain) = c.adapted_chain()?;
        chain_summary(&p, &chain)
    } else {
        Value::Null
    };
    let pass = v.valid && solvable;
    Ok(Outcome {
        report: json!({
            "dim": c.dim(),
            "validation": v,
            "solvable": solvable,
            "chain": chain,
            "pass": pass,
        }),
        pass,
    })
}

fn group_for(c: &StructureConstants) -> Result<(BasisChange, SolvGroup)> {
    let v = c.validate();
    if !v.valid {
        return Err(Error::InvalidArgument(format!("structure constants fail Jacobi at {:?}", v.jacobi)));
    }
    let (p, chain) = c.adapted_chain()?;
    Ok((p, SolvGroup::new(&chain)?))
}

pub fn cmd_coframe(algebra: &Path, cfg: &RunConfig) -> Result<Outcome> {
    let c = load_algebra(algebra)?;
    let (p, g) = group_for(&c)?;
    let residual_zero = g.coframe_residual().iter().all(|r| r.is_zero());
    let duality = g.duality_holds();
    let brackets = g.frame_bracket_check(&Domain::cube(g.dim(), 1.0), cfg.samples, cfg.seed, cfg.sample_tol)?;
    let pass = residual_zero && duality && brackets.pass;
    Ok(Outcome {
        report: json!({
            "chart": g.chart.names(),
            "chain": chain_summary(&p, &g.chain),
            "coframe": g.coframe.iter().map(FormJson::from_form).collect::<Vec<_>>(),
            "coframe_text": g.coframe.iter().map(|t| t.to_text()).collect::<Vec<_>>(),
            "frame": g.frame.iter().map(VectorFieldJson::from_field).collect::<Vec<_>>(),
            "checks": {
                "structure_residual_zero": { "mode": "symbolic", "pass": residual_zero },
                "duality": { "mode": "symbolic", "pass": duality },
                "frame_brackets": check_json(&brackets),
            },
            "pass": pass,
        }),
        pass,
    })
}

pub fn cmd_multiply(algebra: &Path, cfg: &RunConfig) -> Result<Outcome> {
    let c = load_algebra(algebra)?;
    let (p, g) = group_for(&c)?;
    let law = multiplication(&g)?;
    let group = verify_group(&law, &g, cfg.mode, cfg.samples, cfg.seed, cfg.sample_tol)?;
    let pre = preadjoint_oracle(&g, &law, cfg.samples, cfg.seed, cfg.sample_tol)?;
    let pass = group.pass && pre.pass;
    Ok(Outcome {
        report: json!({
            "chain": chain_summary(&p, &g.chain),
            "law": law.to_json(),
            "group": group,
            "preadjoint": pre,
            "pass": pass,
        }),
        pass,
    })
}

fn trace_checks<S: Scalar>(trace: &ReductionTrace<S>, g: &SolvGroup, cfg: &RunConfig, tau: Option<Vec<DiffForm<S>>>) -> Result<(Value, bool)> {
    let at_base = trace.basepoint_values()?;
    let base_ok = at_base.iter().all(|v| v.abs() <= cfg.sample_tol);
    let reassembly = trace.reassembly_holds()?;
    let center: Vec<f64> = trace.basepoint.iter().map(rat_to_f64).collect();
    let domain = Domain::around(center, 0.5);
    let mut out = json!({
        "basepoint_values": at_base,
        "basepoint_ok": base_ok,
        "reassembly": { "mode": "symbolic", "pass": reassembly },
    });
    let mut pass = base_ok && reassembly;
    if trace.is_complete() {
        let check = match tau {
            Some(t) => verify_rho(trace, &t, cfg.mode, &domain, cfg.samples, cfg.seed, cfg.sample_tol)?,
            None => {
                let map = solvlie::forms::SymbolicMap::from_integrals(&trace.functions(), trace.chart.len());
                solvlie::forms::pullback_numeric(&map, &g.coframe, &trace.input, &domain, cfg.samples, cfg.seed, cfg.sample_tol)
            }
        };
        pass &= check.pass;
        out["rho_pullback"] = check_json(&check);
    }
    Ok((out, pass))
}

fn reduce_with<S: ParseScalar>(
    forms: &[FormJson],
    p: &BasisChange,
    g: &SolvGroup,
    cfg: &RunConfig,
    tau: impl Fn(&SolvGroup) -> Option<Vec<DiffForm<S>>>,
) -> Result<Outcome> {
    let input: Vec<DiffForm<S>> = forms_from_json(forms)?;
    if input.is_empty() {
        return Err(Error::Schema("no forms given".into()));
    }
    let adapted = transform_forms(p, &input);
    let chart = adapted[0].chart().clone();
    let basepoint = cfg.basepoint_for(&chart, &vec![Rational::from_integer(0.into()); chart.len()])?;
    let trace = reduce_full(&adapted, &g.chain, &basepoint, cfg.stop_after)?;
    let (checks, pass) = trace_checks(&trace, g, cfg, tau(g))?;
    Ok(Outcome {
        report: json!({
            "class": S::CLASS,
            "chain": chain_summary(p, &g.chain),
            "trace": trace.to_json(),
            "checks": checks,
            "pass": pass,
        }),
        pass,
    })
}

/// Coframe re-expressed with rational coefficients, when it is polynomial.
fn rational_coframe(g: &SolvGroup) -> Option<Vec<DiffForm<RationalFunction>>> {
    g.coframe.iter().map(|t| FormJson::from_form(t).to_form::<RationalFunction>().ok()).collect()
}

pub fn cmd_reduce(algebra: &Path, forms: &Path, cfg: &RunConfig) -> Result<Outcome> {
    let c = load_algebra(algebra)?;
    let (p, g) = group_for(&c)?;
    let forms: Vec<FormJson> = read_json(forms)?;
    if forms_are_rational(&forms) {
        reduce_with::<RationalFunction>(&forms, &p, &g, cfg, rational_coframe)
    } else {
        reduce_with::<ExpPoly>(&forms, &p, &g, cfg, |g| Some(g.coframe.clone()))
    }
}

pub fn cmd_pfaff(system: &Path, cfg: &RunConfig) -> Result<Outcome> {
    let j: PfaffianJson = read_json(system)?;
    let chart = j.chart()?;
    let theta: Vec<DiffForm<RationalFunction>> = forms_from_json(&j.theta)?;
    for t in &theta {
        chart.check_same(t.chart())?;
    }
    let fields = j.symmetry.iter().map(|v| v.to_field::<RationalFunction>(&chart)).collect::<Result<Vec<_>>>()?;
    let sys = PfaffianSystem { chart: chart.clone(), excluded: j.excluded_polys()?, theta };
    let sym = SymmetryAlgebra { fields, constants: j.brackets.to_constants()? };
    let defaults = j.basepoint_values()?;
    let basepoint = cfg.basepoint_for(&chart, &defaults)?;
    let fi = first_integrals(&sys, &sym, &basepoint)?;
    let report = verify_integrals(&fi, &sys, &sym, &basepoint_f64(&basepoint), cfg.samples.min(20), cfg.seed)?;
    let pass = report.pass;
    Ok(Outcome {
        report: json!({
            "chart": chart.names(),
            "basepoint": basepoint.iter().map(solvlie::scalars::poly::fmt_rational).collect::<Vec<_>>(),
            "omega": fi.omega.iter().map(FormJson::from_form).collect::<Vec<_>>(),
            "functions": fi.functions.iter().map(|f| f.to_text()).collect::<Vec<_>>(),
            "trace": fi.trace.to_json(),
            "checks": report,
            "pass": pass,
        }),
        pass,
    })
}

pub fn parse_mode(s: &str) -> Result<VerifyMode> {
    s.parse()
}

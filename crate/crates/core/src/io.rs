//! JSON file formats for forms, vector fields and Pfaffian systems.
//!
//! Coefficients are stored as canonical text and re-parsed on load.
//! Form indices (`idx`) are zero-based positions in `chart`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{DiffForm, VectorField};
use crate::liealg::AlgebraJson;
use crate::scalars::expr::{parse_exppoly, parse_poly, parse_rational, parse_rational_literal};
use crate::scalars::{ExpPoly, Poly, Rational, RationalFunction, Scalar, VarSet};

pub trait ParseScalar: Scalar {
    fn parse(s: &str, chart: &VarSet) -> Result<Self>;
}

impl ParseScalar for RationalFunction {
    fn parse(s: &str, chart: &VarSet) -> Result<Self> {
        parse_rational(s, chart)
    }
}

impl ParseScalar for ExpPoly {
    fn parse(s: &str, chart: &VarSet) -> Result<Self> {
        parse_exppoly(s, chart)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub idx: Vec<usize>,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FormJson {
    pub chart: Vec<String>,
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

impl FormJson {
    pub fn from_form<S: Scalar>(f: &DiffForm<S>) -> Self {
        FormJson {
            chart: f.chart().names().to_vec(),
            degree: f.degree(),
            terms: f.terms().map(|(k, c)| TermJson { idx: k.clone(), coeff: c.to_text() }).collect(),
        }
    }

    pub fn to_form<S: ParseScalar>(&self) -> Result<DiffForm<S>> {
        let chart = VarSet::new(&self.chart)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.idx.len() != self.degree {
                return Err(Error::Schema(format!("term {:?} does not match degree {}", t.idx, self.degree)));
            }
            if let Some(&bad) = t.idx.iter().find(|&&i| i >= chart.len()) {
                return Err(Error::Schema(format!("index {bad} outside chart of size {}", chart.len())));
            }
            terms.push((t.idx.clone(), S::parse(&t.coeff, &chart)?));
        }
        Ok(DiffForm::from_terms(&chart, self.degree, terms))
    }
}

/// Whether every coefficient in `forms` parses as a rational function.
pub fn forms_are_rational(forms: &[FormJson]) -> bool {
    forms.iter().all(|f| {
        VarSet::new(&f.chart)
            .map(|c| f.terms.iter().all(|t| parse_rational(&t.coeff, &c).is_ok()))
            .unwrap_or(false)
    })
}

pub fn forms_from_json<S: ParseScalar>(forms: &[FormJson]) -> Result<Vec<DiffForm<S>>> {
    let out: Vec<DiffForm<S>> = forms.iter().map(|f| f.to_form()).collect::<Result<_>>()?;
    if let Some(first) = out.first() {
        for f in &out {
            first.chart().check_same(f.chart())?;
        }
    }
    Ok(out)
}

/// Components keyed by coordinate name; omitted coordinates are zero.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VectorFieldJson {
    pub components: BTreeMap<String, String>,
}

impl VectorFieldJson {
    pub fn from_field<S: Scalar>(x: &VectorField<S>) -> Self {
        let components = x
            .components()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (x.chart().name(i).to_string(), c.to_text()))
            .collect();
        VectorFieldJson { components }
    }

    pub fn to_field<S: ParseScalar>(&self, chart: &VarSet) -> Result<VectorField<S>> {
        let mut comps: Vec<S> = (0..chart.len()).map(|_| S::zero(chart)).collect();
        for (name, text) in &self.components {
            comps[chart.require(name)?] = S::parse(text, chart)?;
        }
        Ok(VectorField::new(chart, comps))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PfaffianJson {
    pub chart: Vec<String>,
    #[serde(default)]
    pub excluded: Vec<String>,
    pub theta: Vec<FormJson>,
    pub symmetry: Vec<VectorFieldJson>,
    pub brackets: AlgebraJson,
    #[serde(default)]
    pub basepoint: Option<BTreeMap<String, String>>,
}

impl PfaffianJson {
    pub fn chart(&self) -> Result<VarSet> {
        VarSet::new(&self.chart)
    }

    pub fn excluded_polys(&self) -> Result<Vec<Poly>> {
        let c = self.chart()?;
        self.excluded.iter().map(|s| parse_poly(s, &c)).collect()
    }

    pub fn basepoint_values(&self) -> Result<Vec<Rational>> {
        let c = self.chart()?;
        let mut out = vec![Rational::from_integer(0.into()); c.len()];
        if let Some(bp) = &self.basepoint {
            for (k, v) in bp {
                out[c.require(k)?] = parse_rational_literal(v)?;
            }
        }
        Ok(out)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

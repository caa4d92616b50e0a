use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::Rational;

/// How verifications are carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Symbolic,
    Numeric,
    #[default]
    Auto,
}

impl std::str::FromStr for VerifyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symbolic" => Ok(VerifyMode::Symbolic),
            "numeric" => Ok(VerifyMode::Numeric),
            "auto" => Ok(VerifyMode::Auto),
            _ => Err(Error::InvalidArgument(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub zero_tol: f64,
    pub sample_tol: f64,
    pub samples: usize,
    pub seed: u64,
    /// `(name, value)` overrides; unnamed coordinates default to 0.
    #[serde(skip)]
    pub basepoint: Vec<(String, Rational)>,
    pub mode: VerifyMode,
    pub stop_after: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            zero_tol: 1e-10,
            sample_tol: 1e-8,
            samples: 100,
            seed: 0,
            basepoint: Vec::new(),
            mode: VerifyMode::Auto,
            stop_after: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.zero_tol > 0.0) || !(self.sample_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument("sample count must be at least 1".into()));
        }
        Ok(())
    }

    /// Install the zero tolerance used by exponential-polynomial arithmetic.
    pub fn apply(&self) -> Result<()> {
        self.validate()?;
        crate::scalars::set_zero_tol(self.zero_tol);
        Ok(())
    }

    /// Basepoint over `chart`, with `defaults` for unnamed coordinates.
    pub fn basepoint_for(&self, chart: &crate::scalars::VarSet, defaults: &[Rational]) -> Result<Vec<Rational>> {
        let mut out = defaults.to_vec();
        for (name, v) in &self.basepoint {
            let i = chart.require(name)?;
            out[i] = v.clone();
        }
        Ok(out)
    }
}

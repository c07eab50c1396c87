//! Scenario files: nine parameters by name, optional sweep blocks, output options.

use std::path::{Path, PathBuf};

use mcost_core::Params;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const PARAM_NAMES: [&str; 9] = ["ci_r", "cp_r", "m_r", "ci_f", "cp_f", "m_f", "cl", "d1", "d2"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepBlock {
    /// Position of the swept parameter in flat parameter order.
    pub fn index(&self) -> Result<usize, CliError> {
        PARAM_NAMES
            .iter()
            .position(|n| *n == self.param)
            .ok_or_else(|| {
                CliError::Validation(format!(
                    "sweep parameter `{}` is not one of {}",
                    self.param,
                    PARAM_NAMES.join(", ")
                ))
            })
    }

    /// Evenly spaced grid including both ends.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.to
                } else {
                    self.from + (self.to - self.from) * k as f64 / last
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<(), CliError> {
        self.index()?;
        if self.steps < 2 {
            return Err(CliError::Validation(format!(
                "sweep over `{}` needs at least 2 steps, got {}",
                self.param, self.steps
            )));
        }
        if !self.from.is_finite() || !self.to.is_finite() {
            return Err(CliError::Validation(format!("sweep over `{}` has a non-finite end", self.param)));
        }
        if self.from == self.to {
            return Err(CliError::Validation(format!(
                "sweep over `{}` has from = to = {}",
                self.param, self.from
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub ci_r: f64,
    pub cp_r: f64,
    pub m_r: f64,
    pub ci_f: f64,
    pub cp_f: f64,
    pub m_f: f64,
    pub cl: f64,
    pub d1: f64,
    pub d2: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepBlock>,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn from_params(p: &Params) -> Self {
        let [ci_r, cp_r, m_r, ci_f, cp_f, m_f, cl, d1, d2] = p.to_array();
        Self {
            ci_r,
            cp_r,
            m_r,
            ci_f,
            cp_f,
            m_f,
            cl,
            d1,
            d2,
            sweep: Vec::new(),
            format: Format::Text,
            output: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Validation(m) => CliError::Validation(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn params(&self) -> Params {
        Params::new(
            self.ci_r, self.cp_r, self.m_r, self.ci_f, self.cp_f, self.m_f, self.cl, self.d1, self.d2,
        )
    }

    /// Parameters with the swept entries replaced by `values`, in block order.
    pub fn params_at(&self, values: &[f64]) -> Result<Params, CliError> {
        let mut a = self.params().to_array();
        for (block, v) in self.sweep.iter().zip(values) {
            a[block.index()?] = *v;
        }
        Ok(Params::from_array(a))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params()
            .validate()
            .map_err(|e| CliError::Validation(e.to_string()))?;
        for block in &self.sweep {
            block.validate()?;
        }
        if self.sweep.len() > 2 {
            return Err(CliError::Validation(format!(
                "at most 2 sweep blocks allowed, got {}",
                self.sweep.len()
            )));
        }
        if self.sweep.len() == 2 && self.sweep[0].param == self.sweep[1].param {
            return Err(CliError::Validation(format!(
                "parameter `{}` swept twice",
                self.sweep[0].param
            )));
        }
        Ok(())
    }
}

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::construction::Budget;
use crate::error::{HullError, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunBudget {
    #[serde(default)]
    pub max_tori_per_level: Option<u64>,
    #[serde(default)]
    pub max_seconds: Option<f64>,
}

/// Everything a construction run depends on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub beta: f64,
    pub depth: u32,
    #[serde(rename = "B")]
    pub b: f64,
    /// Sampling resolution of the verification checks.
    pub resolution: f64,
    pub eps_initial: f64,
    #[serde(default)]
    pub budget: RunBudget,
    pub seed: u64,
    pub output: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            beta: 0.5,
            depth: 1,
            b: 10.0,
            resolution: 1e-3,
            eps_initial: 1e-3,
            budget: RunBudget::default(),
            seed: 0,
            output: PathBuf::from("tree.json"),
        }
    }
}

/// `(field, message)` for the first invalid field.
fn first_violation(c: &RunConfig) -> Option<(&'static str, String)> {
    let open_unit = |x: f64| x > 0.0 && x < 1.0;
    if !open_unit(c.beta) {
        return Some(("beta", format!("beta = {} must lie in (0, 1)", c.beta)));
    }
    if !(1..=8).contains(&c.depth) {
        return Some(("depth", format!("depth = {} must lie in 1..=8", c.depth)));
    }
    if !(c.b >= 5.0 && c.b <= 1000.0) {
        return Some(("B", format!("B = {} must lie in [5, 1000]", c.b)));
    }
    if !(c.resolution > 0.0 && c.resolution <= 0.1) {
        return Some(("resolution", format!("resolution = {} must lie in (0, 0.1]", c.resolution)));
    }
    if !(c.eps_initial > 0.0 && c.eps_initial <= 0.01) {
        return Some(("eps_initial", format!("eps_initial = {} must lie in (0, 0.01]", c.eps_initial)));
    }
    if let Some(s) = c.budget.max_seconds {
        if !(s > 0.0 && s.is_finite()) {
            return Some(("max_seconds", format!("max_seconds = {s} must be positive")));
        }
    }
    if c.output.as_os_str().is_empty() {
        return Some(("output", "output path is empty".into()));
    }
    None
}

/// 1-based line of the first occurrence of `"key"` in `text`.
fn key_line(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        match first_violation(self) {
            None => Ok(()),
            Some((_, msg)) => Err(HullError::Config(msg)),
        }
    }

    /// Parses and validates a JSON config; errors name the offending line.
    pub fn from_json(text: &str) -> Result<Self> {
        let c: RunConfig = serde_json::from_str(text).map_err(|e| HullError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        match first_violation(&c) {
            None => Ok(c),
            Some((key, msg)) => Err(HullError::Config(match key_line(text, key) {
                Some(line) => format!("line {line}: {msg}"),
                None => msg,
            })),
        }
    }

    pub fn budget(&self) -> Budget {
        Budget {
            b: self.b,
            eps0: self.eps_initial,
            max_tori: self.budget.max_tori_per_level,
            max_seconds: self.budget.max_seconds,
            ..Budget::default()
        }
    }
}

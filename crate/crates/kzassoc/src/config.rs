//! Validated run configuration shared by every subcommand.

use std::path::PathBuf;

use serde::Serialize;

/// Largest accepted truncation order. The word space of `𝒯₄` at degree 8 already has 6⁸ columns.
pub const MAX_ORDER: usize = 8;
/// Largest accepted number of Simpson panels per segment.
pub const MAX_STEPS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("order {0} exceeds the maximum {MAX_ORDER}")]
    Order(usize),
    #[error("steps must be in 1..={MAX_STEPS}, got {0}")]
    Steps(usize),
    #[error("{name} = {value} is outside ]0, 1/4]")]
    Regulator { name: &'static str, value: f64 },
    #[error("tolerance must be positive and finite, got {0}")]
    Tolerance(f64),
    #[error("grid must be non-empty, strictly decreasing and inside ]0, 1/4]")]
    Grid,
    #[error("cannot parse grid `{0}`; expected `2^-a..2^-b` or a comma list")]
    GridSyntax(String),
}

/// Coefficient field of the series. Only double-precision complex is implemented.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    #[default]
    C64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub order: usize,
    pub steps: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub grid: Vec<f64>,
    pub tolerance: f64,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub scalar: ScalarKind,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.order > MAX_ORDER {
            return Err(ConfigError::Order(self.order));
        }
        if self.steps == 0 || self.steps > MAX_STEPS {
            return Err(ConfigError::Steps(self.steps));
        }
        for (name, value) in [("delta", self.delta), ("epsilon", self.epsilon)] {
            if !in_range(value) {
                return Err(ConfigError::Regulator { name, value });
            }
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(ConfigError::Tolerance(self.tolerance));
        }
        if self.grid.is_empty() || !self.grid.iter().all(|&d| in_range(d)) || self.grid.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(ConfigError::Grid);
        }
        Ok(())
    }
}

fn in_range(x: f64) -> bool {
    x > 0.0 && x <= 0.25
}

/// Parses `2^-4..2^-10` (dyadic range, either direction) or `0.1,0.05,0.01`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, ConfigError> {
    let err = || ConfigError::GridSyntax(spec.to_string());
    let spec = spec.trim();
    if let Some((lo, hi)) = spec.split_once("..") {
        let exponent = |s: &str| -> Result<i32, ConfigError> {
            s.trim().strip_prefix("2^").ok_or_else(err)?.parse::<i32>().map_err(|_| err())
        };
        let (a, b) = (exponent(lo)?, exponent(hi)?);
        let (from, to) = if a >= b { (a, b) } else { (b, a) };
        if to < -1074 {
            return Err(err());
        }
        return Ok((to..=from).rev().map(|k| 2f64.powi(k)).collect());
    }
    spec.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| err())).collect()
}

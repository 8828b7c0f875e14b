use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest generator horizon accepted into analysis.
pub const MIN_HORIZON: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid analysis config: {0}")]
pub struct ConfigError(pub String);

/// Tolerances and sampling parameters shared by every analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Guards floating-point noise on exact inputs.
    pub tolerance: f64,
    /// Used instead of `tolerance` when any input is sampled.
    pub sampled_tolerance: f64,
    /// Default sample horizon for generator symbols.
    pub horizon: usize,
    /// Fraction of the samples, counted from the end, treated as the tail window.
    pub window_fraction: f64,
    /// Number of tail blocks a sampled cluster point must recur in.
    pub checkpoints: usize,
    /// How many explicit points text reports list before summarizing.
    pub spectrum_points: usize,
    /// Points at which Fredholmness of `T - mu I` is reported.
    pub fredholm_queries: Vec<Complex64>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            tolerance: 1e-9,
            sampled_tolerance: 1e-3,
            horizon: 100_000,
            window_fraction: 0.5,
            checkpoints: 8,
            spectrum_points: 12,
            fredholm_queries: vec![Complex64::new(0.0, 0.0)],
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(ConfigError(format!(
                "tolerance must be > 0, got {}",
                self.tolerance
            )));
        }
        if !(self.sampled_tolerance > 0.0 && self.sampled_tolerance.is_finite()) {
            return Err(ConfigError(format!(
                "sampled_tolerance must be > 0, got {}",
                self.sampled_tolerance
            )));
        }
        if self.horizon < MIN_HORIZON {
            return Err(ConfigError(format!(
                "horizon must be >= {MIN_HORIZON}, got {}",
                self.horizon
            )));
        }
        if !(self.window_fraction > 0.0 && self.window_fraction <= 1.0) {
            return Err(ConfigError(format!(
                "window_fraction must lie in (0, 1], got {}",
                self.window_fraction
            )));
        }
        if self.checkpoints == 0 {
            return Err(ConfigError("checkpoints must be >= 1".into()));
        }
        Ok(())
    }

    /// Tolerance appropriate for exact or estimated inputs.
    pub fn tolerance_for(&self, estimated: bool) -> f64 {
        if estimated {
            self.sampled_tolerance
        } else {
            self.tolerance
        }
    }
}

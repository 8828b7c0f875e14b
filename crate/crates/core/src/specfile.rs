//! JSON operator specifications.
//!
//! ```json
//! {
//!   "label": "alternating plus segment",
//!   "atomic": {"kind": "eventually_periodic", "prefix": [[5, 0]], "period": [[1, 0], [-1, 0]]},
//!   "nonatomic": [{"kind": "segment", "a": [0, 0], "b": [1.5, 0]}],
//!   "config": {"tolerance": 1e-9}
//! }
//! ```
//!
//! Complex numbers are `[re, im]`. Unknown keys are rejected everywhere.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{AnalysisConfig, ConfigError};
use crate::expr::{self, ExprError};
use crate::operator::{CenterOperator, OperatorError};
use crate::spectra::{Primitive, SpectraError, SpectralSet};
use crate::symbol::{AtomicSymbol, GeneratorSymbol, SymbolError};

#[derive(Debug, Error)]
pub enum SpecFileError {
    #[error("line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("generator expression `{text}`: {source}")]
    Expr { text: String, source: ExprError },
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AtomicSpec {
    Finite {
        values: Vec<Complex64>,
    },
    EventuallyZero {
        prefix: Vec<Complex64>,
    },
    Convergent {
        #[serde(default)]
        prefix: Vec<Complex64>,
        limit: Complex64,
    },
    EventuallyPeriodic {
        #[serde(default)]
        prefix: Vec<Complex64>,
        period: Vec<Complex64>,
    },
    Generator {
        expr: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<usize>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled_tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fredholm_queries: Option<Vec<Complex64>>,
}

impl ConfigOverrides {
    pub fn apply(&self, base: &AnalysisConfig) -> AnalysisConfig {
        let mut cfg = base.clone();
        if let Some(v) = self.tolerance {
            cfg.tolerance = v;
        }
        if let Some(v) = self.sampled_tolerance {
            cfg.sampled_tolerance = v;
        }
        if let Some(v) = self.horizon {
            cfg.horizon = v;
        }
        if let Some(v) = self.window_fraction {
            cfg.window_fraction = v;
        }
        if let Some(v) = self.checkpoints {
            cfg.checkpoints = v;
        }
        if let Some(v) = self.spectrum_points {
            cfg.spectrum_points = v;
        }
        if let Some(v) = &self.fredholm_queries {
            cfg.fredholm_queries = v.clone();
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpecFile {
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub atomic: Option<AtomicSpec>,
    #[serde(default)]
    pub nonatomic: Option<Vec<Primitive>>,
    #[serde(default)]
    pub config: ConfigOverrides,
}

impl OperatorSpecFile {
    pub fn from_json(text: &str) -> Result<OperatorSpecFile, SpecFileError> {
        serde_json::from_str(text).map_err(|e| {
            let full = e.to_string();
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            SpecFileError::Json {
                line: e.line(),
                column: e.column(),
                message: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
            }
        })
    }

    /// Resolves the effective config and builds the operator.
    ///
    /// Precedence for the generator horizon: `horizon_override`, then the
    /// symbol's own `horizon`, then the config.
    pub fn build(
        &self,
        base: &AnalysisConfig,
        horizon_override: Option<usize>,
    ) -> Result<(CenterOperator, AnalysisConfig), SpecFileError> {
        let mut cfg = self.config.apply(base);
        if let Some(h) = horizon_override {
            cfg.horizon = h;
        }
        cfg.validate()?;
        let atomic = self
            .atomic
            .as_ref()
            .map(|spec| atomic_symbol(spec, &cfg, horizon_override))
            .transpose()?;
        let nonatomic = self
            .nonatomic
            .as_ref()
            .map(|parts| SpectralSet::new(parts.clone()))
            .transpose()?;
        let op = CenterOperator::new(self.label.clone(), atomic, nonatomic)?;
        Ok((op, cfg))
    }
}

fn atomic_symbol(
    spec: &AtomicSpec,
    cfg: &AnalysisConfig,
    horizon_override: Option<usize>,
) -> Result<AtomicSymbol, SpecFileError> {
    let sym = match spec {
        AtomicSpec::Finite { values } => AtomicSymbol::Finite {
            values: values.clone(),
        },
        AtomicSpec::EventuallyZero { prefix } => AtomicSymbol::EventuallyZero {
            prefix: prefix.clone(),
        },
        AtomicSpec::Convergent { prefix, limit } => AtomicSymbol::ConvergentTail {
            prefix: prefix.clone(),
            limit: *limit,
        },
        AtomicSpec::EventuallyPeriodic { prefix, period } => AtomicSymbol::EventuallyPeriodic {
            prefix: prefix.clone(),
            period: period.clone(),
        },
        AtomicSpec::Generator { expr, horizon } => {
            let parsed = expr::parse(expr, "n").map_err(|source| SpecFileError::Expr {
                text: expr.clone(),
                source,
            })?;
            let horizon = horizon_override.or(*horizon).unwrap_or(cfg.horizon);
            AtomicSymbol::Generator(
                GeneratorSymbol::new(parsed, horizon)?.with_window(cfg.window_fraction),
            )
        }
    };
    sym.validate()?;
    Ok(sym)
}

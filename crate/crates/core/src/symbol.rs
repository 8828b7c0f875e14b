//! Multiplier families `(λ_n)` of the atomic part.
//!
//! Atoms are enumerated `1, 2, 3, ...`. Four variants describe the whole
//! sequence exactly; [`GeneratorSymbol`] samples a closed-form expression up
//! to a finite horizon and every quantity derived from it is an estimate.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{AnalysisConfig, MIN_HORIZON};
use crate::expr::{Expr, ExprError};
use crate::frechet;
use crate::spectra::{Primitive, SpectralSet};

/// Generator samples above this modulus are treated as unbounded.
pub const MAX_SAMPLE_MODULUS: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolError {
    #[error("eventually periodic symbol needs a non-empty period")]
    EmptyPeriod,
    #[error("finite symbol needs at least one value")]
    EmptyFinite,
    #[error("symbol value {value} at index {index} is not finite")]
    NonFinite { index: usize, value: Complex64 },
    #[error("generator horizon {0} is below the minimum of {MIN_HORIZON}")]
    HorizonTooSmall(usize),
    #[error(
        "generator value at n = {n} has modulus {modulus:e}, exceeding {MAX_SAMPLE_MODULUS:e}"
    )]
    Unbounded { n: usize, modulus: f64 },
    #[error("generator failed at n = {n}: {source}")]
    Eval { n: usize, source: ExprError },
}

/// A closed-form symbol `λ_n = expr(n)` sampled for `n = 1..=horizon`.
#[derive(Debug, Clone)]
pub struct GeneratorSymbol {
    expr: Expr,
    horizon: usize,
    window_fraction: f64,
    samples: Arc<[Complex64]>,
    // suffix_max[k] = max_{j >= k} |samples[j]|
    suffix_max: Arc<[f64]>,
}

impl PartialEq for GeneratorSymbol {
    fn eq(&self, other: &Self) -> bool {
        self.expr == other.expr
            && self.horizon == other.horizon
            && self.window_fraction == other.window_fraction
    }
}

impl GeneratorSymbol {
    /// Samples `expr` at `n = 1..=horizon` and validates boundedness.
    pub fn new(expr: Expr, horizon: usize) -> Result<GeneratorSymbol, SymbolError> {
        if horizon < MIN_HORIZON {
            return Err(SymbolError::HorizonTooSmall(horizon));
        }
        let evaluated: Vec<Result<Complex64, ExprError>> = (1..=horizon)
            .into_par_iter()
            .map(|n| expr.eval_real(n as f64))
            .collect();
        let mut samples = Vec::with_capacity(horizon);
        for (k, v) in evaluated.into_iter().enumerate() {
            samples.push(v.map_err(|source| SymbolError::Eval { n: k + 1, source })?);
        }
        GeneratorSymbol::from_samples(expr, samples, 0.5)
    }

    fn from_samples(
        expr: Expr,
        samples: Vec<Complex64>,
        window_fraction: f64,
    ) -> Result<GeneratorSymbol, SymbolError> {
        for (k, z) in samples.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(SymbolError::NonFinite {
                    index: k + 1,
                    value: *z,
                });
            }
            let modulus = z.norm();
            if modulus > MAX_SAMPLE_MODULUS {
                return Err(SymbolError::Unbounded { n: k + 1, modulus });
            }
        }
        let mut suffix_max = vec![0.0; samples.len()];
        let mut running = 0.0f64;
        for k in (0..samples.len()).rev() {
            running = running.max(samples[k].norm());
            suffix_max[k] = running;
        }
        Ok(GeneratorSymbol {
            expr,
            horizon: samples.len(),
            window_fraction,
            samples: samples.into(),
            suffix_max: suffix_max.into(),
        })
    }

    /// Sets the tail-window fraction used for limsup/liminf/cluster estimates.
    pub fn with_window(mut self, fraction: f64) -> GeneratorSymbol {
        self.window_fraction = fraction.clamp(f64::MIN_POSITIVE, 1.0);
        self
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn window_fraction(&self) -> f64 {
        self.window_fraction
    }

    /// `λ_1 ..= λ_horizon`.
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Samples with `n` in the tail window `(horizon * (1 - fraction), horizon]`.
    pub fn window(&self) -> &[Complex64] {
        let len =
            ((self.horizon as f64 * self.window_fraction).round() as usize).clamp(1, self.horizon);
        &self.samples[self.horizon - len..]
    }

    fn tail_sup(&self, n: usize) -> f64 {
        self.suffix_max[n.min(self.horizon - 1)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AtomicSymbol {
    /// Finitely many atoms.
    Finite {
        values: Vec<Complex64>,
    },
    /// `prefix` followed by zeros.
    EventuallyZero {
        prefix: Vec<Complex64>,
    },
    /// `prefix` followed by a tail that is absorbed into `limit`.
    ConvergentTail {
        prefix: Vec<Complex64>,
        limit: Complex64,
    },
    /// `prefix` followed by `period` repeated forever.
    EventuallyPeriodic {
        prefix: Vec<Complex64>,
        period: Vec<Complex64>,
    },
    Generator(GeneratorSymbol),
}

fn max_modulus(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_finite(values: &[Complex64], base: usize) -> Result<(), SymbolError> {
    match values
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        Some(k) => Err(SymbolError::NonFinite {
            index: base + k + 1,
            value: values[k],
        }),
        None => Ok(()),
    }
}

impl AtomicSymbol {
    pub fn validate(&self) -> Result<(), SymbolError> {
        match self {
            AtomicSymbol::Finite { values } => {
                if values.is_empty() {
                    return Err(SymbolError::EmptyFinite);
                }
                check_finite(values, 0)
            }
            AtomicSymbol::EventuallyZero { prefix } => check_finite(prefix, 0),
            AtomicSymbol::ConvergentTail { prefix, limit } => {
                check_finite(prefix, 0)?;
                check_finite(std::slice::from_ref(limit), prefix.len())
            }
            AtomicSymbol::EventuallyPeriodic { prefix, period } => {
                if period.is_empty() {
                    return Err(SymbolError::EmptyPeriod);
                }
                check_finite(prefix, 0)?;
                check_finite(period, prefix.len())
            }
            AtomicSymbol::Generator(g) => {
                if g.horizon < MIN_HORIZON {
                    Err(SymbolError::HorizonTooSmall(g.horizon))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// True when derived quantities are sampled estimates.
    pub fn is_estimated(&self) -> bool {
        matches!(self, AtomicSymbol::Generator(_))
    }

    /// Index after which the exact tail model takes over.
    pub fn analytic_tail_start(&self) -> Option<usize> {
        match self {
            AtomicSymbol::Finite { values } => Some(values.len()),
            AtomicSymbol::EventuallyZero { prefix }
            | AtomicSymbol::ConvergentTail { prefix, .. }
            | AtomicSymbol::EventuallyPeriodic { prefix, .. } => Some(prefix.len()),
            AtomicSymbol::Generator(_) => None,
        }
    }

    /// `λ_n` for 1-based `n`; `None` past the end of a finite symbol.
    pub fn value(&self, n: usize) -> Result<Option<Complex64>, SymbolError> {
        if n == 0 {
            return Ok(None);
        }
        let k = n - 1;
        Ok(match self {
            AtomicSymbol::Finite { values } => values.get(k).copied(),
            AtomicSymbol::EventuallyZero { prefix } => {
                Some(prefix.get(k).copied().unwrap_or_default())
            }
            AtomicSymbol::ConvergentTail { prefix, limit } => {
                Some(prefix.get(k).copied().unwrap_or(*limit))
            }
            AtomicSymbol::EventuallyPeriodic { prefix, period } => Some(match prefix.get(k) {
                Some(z) => *z,
                None => period[(k - prefix.len()) % period.len()],
            }),
            AtomicSymbol::Generator(g) => Some(match g.samples.get(k) {
                Some(z) => *z,
                None => g
                    .expr
                    .eval_real(n as f64)
                    .map_err(|source| SymbolError::Eval { n, source })?,
            }),
        })
    }

    /// `sup_n |λ_n|`; a lower bound for generators.
    pub fn sup_modulus(&self) -> f64 {
        self.tail_sup(0)
    }

    /// `sup_{n > start} |λ_n|`, non-increasing in `start`.
    pub fn tail_sup(&self, start: usize) -> f64 {
        let tail = |v: &[Complex64]| max_modulus(v.get(start..).unwrap_or(&[]));
        match self {
            AtomicSymbol::Finite { values } => tail(values),
            AtomicSymbol::EventuallyZero { prefix } => tail(prefix),
            AtomicSymbol::ConvergentTail { prefix, limit } => tail(prefix).max(limit.norm()),
            AtomicSymbol::EventuallyPeriodic { prefix, period } => {
                tail(prefix).max(max_modulus(period))
            }
            AtomicSymbol::Generator(g) => g.tail_sup(start),
        }
    }

    /// Closure of `{λ_n}`: the spectrum of the atomic part.
    pub fn values_closure(&self, cfg: &AnalysisConfig) -> SpectralSet {
        match self {
            AtomicSymbol::Finite { values } => SpectralSet::points(values.iter().copied()),
            AtomicSymbol::EventuallyZero { prefix } => {
                SpectralSet::points(prefix.iter().copied().chain([Complex64::new(0.0, 0.0)]))
            }
            AtomicSymbol::ConvergentTail { prefix, limit } => {
                SpectralSet::points(prefix.iter().copied().chain([*limit]))
            }
            AtomicSymbol::EventuallyPeriodic { prefix, period } => {
                SpectralSet::points(prefix.iter().chain(period).copied())
            }
            AtomicSymbol::Generator(g) => {
                let tol = cfg.sampled_tolerance;
                let points = crate::grid::thin(g.samples.iter().copied(), tol / 2f64.sqrt());
                let mut set = SpectralSet::empty();
                set.push(Primitive::SampleCloud {
                    points,
                    resolution: tol,
                });
                let clusters = frechet::cluster_points(self, cfg);
                set.union(&SpectralSet::points(clusters.points))
            }
        }
    }

    /// The symbol `alpha * λ_n + shift`.
    pub fn affine(&self, alpha: Complex64, shift: Complex64) -> Result<AtomicSymbol, SymbolError> {
        let f = |z: &Complex64| alpha * z + shift;
        let map = |v: &[Complex64]| v.iter().map(f).collect::<Vec<_>>();
        let out = match self {
            AtomicSymbol::Finite { values } => AtomicSymbol::Finite {
                values: map(values),
            },
            AtomicSymbol::EventuallyZero { prefix } if shift == Complex64::new(0.0, 0.0) => {
                AtomicSymbol::EventuallyZero {
                    prefix: map(prefix),
                }
            }
            AtomicSymbol::EventuallyZero { prefix } => AtomicSymbol::ConvergentTail {
                prefix: map(prefix),
                limit: shift,
            },
            AtomicSymbol::ConvergentTail { prefix, limit } => AtomicSymbol::ConvergentTail {
                prefix: map(prefix),
                limit: f(limit),
            },
            AtomicSymbol::EventuallyPeriodic { prefix, period } => {
                AtomicSymbol::EventuallyPeriodic {
                    prefix: map(prefix),
                    period: map(period),
                }
            }
            AtomicSymbol::Generator(g) => AtomicSymbol::Generator(GeneratorSymbol::from_samples(
                g.expr.affine(alpha, shift),
                map(&g.samples),
                g.window_fraction,
            )?),
        };
        out.validate()?;
        Ok(out)
    }

    pub fn scaled(&self, alpha: Complex64) -> Result<AtomicSymbol, SymbolError> {
        self.affine(alpha, Complex64::new(0.0, 0.0))
    }

    pub fn shifted(&self, shift: Complex64) -> Result<AtomicSymbol, SymbolError> {
        self.affine(Complex64::new(1.0, 0.0), shift)
    }
}

//! Limits along the Fréchet (cofinite) filter on the atom index.
//!
//! For a bounded `f`, `limsup |f|` is the infimum over cofinite sets `F` of
//! `sup_F |f|`, and it equals the largest modulus of a cluster point of `f`.
//! It is also the distance from `f` to `c0` in the sup norm, which is why
//! [`quotient_norm`] simply returns it.
//!
//! A finite atom set has `∅` in its Fréchet filter. Such symbols get limsup
//! and liminf `0` and no cluster points, matching the fact that finite-rank
//! diagonal operators contribute nothing to the essential spectrum.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::AnalysisConfig;
use crate::grid::Grid;
use crate::oracle;
use crate::symbol::AtomicSymbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterEstimate {
    pub points: Vec<Complex64>,
    pub method: Method,
    /// Merge radius; `0` for exact results.
    pub tolerance: f64,
}

impl ClusterEstimate {
    pub fn max_modulus(&self) -> Option<f64> {
        self.points.iter().map(|z| z.norm()).reduce(f64::max)
    }
}

fn modulus_bounds(values: &[Complex64]) -> (f64, f64) {
    values
        .iter()
        .map(|z| z.norm())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), m| {
            (lo.min(m), hi.max(m))
        })
}

pub fn limsup_modulus(sym: &AtomicSymbol) -> f64 {
    match sym {
        AtomicSymbol::Finite { .. } | AtomicSymbol::EventuallyZero { .. } => 0.0,
        AtomicSymbol::ConvergentTail { limit, .. } => limit.norm(),
        AtomicSymbol::EventuallyPeriodic { period, .. } => modulus_bounds(period).1,
        AtomicSymbol::Generator(g) => modulus_bounds(g.window()).1,
    }
}

pub fn liminf_modulus(sym: &AtomicSymbol) -> f64 {
    match sym {
        AtomicSymbol::Finite { .. } | AtomicSymbol::EventuallyZero { .. } => 0.0,
        AtomicSymbol::ConvergentTail { limit, .. } => limit.norm(),
        AtomicSymbol::EventuallyPeriodic { period, .. } => modulus_bounds(period).0,
        AtomicSymbol::Generator(g) => modulus_bounds(g.window()).0,
    }
}

/// Distance from the symbol to `c0(A)` in `l∞(A)`.
pub fn quotient_norm(sym: &AtomicSymbol) -> f64 {
    limsup_modulus(sym)
}

pub fn cluster_points(sym: &AtomicSymbol, cfg: &AnalysisConfig) -> ClusterEstimate {
    let exact = |points: Vec<Complex64>| ClusterEstimate {
        points: dedup_points(points, 0.0),
        method: Method::Exact,
        tolerance: 0.0,
    };
    match sym {
        AtomicSymbol::Finite { .. } => exact(Vec::new()),
        AtomicSymbol::EventuallyZero { .. } => exact(vec![Complex64::new(0.0, 0.0)]),
        AtomicSymbol::ConvergentTail { limit, .. } => exact(vec![*limit]),
        AtomicSymbol::EventuallyPeriodic { period, .. } => exact(period.clone()),
        AtomicSymbol::Generator(g) => {
            let eps = cfg.sampled_tolerance;
            let checkpoints = cfg.checkpoints.min(g.window().len()).max(1);
            ClusterEstimate {
                points: oracle::block_clusters(g.window(), eps, checkpoints),
                method: Method::Sampled,
                tolerance: eps,
            }
        }
    }
}

/// Argument in `(-π, π]`, treating `-0` as `+0`.
fn arg(z: &Complex64) -> f64 {
    (z.im + 0.0).atan2(z.re)
}

fn tie_break(a: &Complex64, b: &Complex64) -> Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then_with(|| arg(a).total_cmp(&arg(b)))
}

/// Sorts by ascending modulus, then ascending argument, and drops every
/// point within `tol` of an earlier kept one. `tol = 0` removes exact
/// duplicates only.
pub fn dedup_points(mut points: Vec<Complex64>, tol: f64) -> Vec<Complex64> {
    points.sort_by(tie_break);
    if tol <= 0.0 {
        points.dedup_by(|a, b| a == b);
        return points;
    }
    let mut grid = Grid::new(tol);
    let mut kept = Vec::new();
    for z in points {
        if !grid.any_within(z, tol) {
            grid.insert(z);
            kept.push(z);
        }
    }
    kept
}

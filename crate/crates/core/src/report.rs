use std::fmt::{self, Write as _};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::AnalysisConfig;
use crate::operator::{CenterOperator, OperatorError};
use crate::spectra::{Primitive, SpectralSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FredholmQuery {
    pub mu: Complex64,
    pub fredholm: bool,
}

/// Everything [`analyze`] computes for one operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralReport {
    pub label: String,
    pub norm: f64,
    pub essential_norm: f64,
    pub essential_spectral_radius: f64,
    pub spectrum: SpectralSet,
    pub essential_spectrum: SpectralSet,
    /// Cluster points of the atomic symbol; `None` without an atomic part.
    pub atomic_cluster_points: Option<Vec<Complex64>>,
    pub compact: bool,
    pub essentially_quasinilpotent: bool,
    pub invertible: bool,
    pub fredholm: Vec<FredholmQuery>,
    pub decomposable: bool,
    pub tolerance: f64,
    pub estimated: bool,
}

pub fn analyze(op: &CenterOperator, cfg: &AnalysisConfig) -> Result<SpectralReport, OperatorError> {
    cfg.validate()?;
    let (spectrum, (essential_spectrum, clusters)) = rayon::join(
        || op.spectrum(cfg),
        || (op.essential_spectrum(cfg), op.atomic_clusters(cfg)),
    );
    let essential_norm = op.essential_norm();
    let fredholm = cfg
        .fredholm_queries
        .iter()
        .map(|&mu| FredholmQuery {
            mu,
            fredholm: op.is_fredholm(mu, cfg),
        })
        .collect();
    Ok(SpectralReport {
        label: op.label().to_string(),
        norm: op.norm(),
        essential_norm,
        essential_spectral_radius: op.essential_spectral_radius(),
        spectrum,
        essential_spectrum,
        atomic_cluster_points: clusters.map(|c| c.points),
        compact: op.is_compact(cfg),
        essentially_quasinilpotent: op.is_essentially_quasinilpotent(cfg),
        invertible: op.is_invertible(cfg),
        fredholm,
        decomposable: op.decompose(cfg).is_ok(),
        tolerance: op.tolerance(cfg),
        estimated: op.is_estimated(),
    })
}

pub(crate) fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Human-readable summary of a set, listing at most `limit` points.
pub fn describe_set(set: &SpectralSet, limit: usize) -> String {
    if set.is_empty() {
        return "∅".into();
    }
    let mut points = Vec::new();
    let mut shapes = Vec::new();
    for p in set.parts() {
        match p {
            Primitive::Point { z } => {
                if !points.contains(z) {
                    points.push(*z)
                }
            }
            Primitive::Segment { a, b } => shapes.push(format!(
                "segment [{}, {}]",
                fmt_complex(*a),
                fmt_complex(*b)
            )),
            Primitive::ClosedDisc { center, radius } => shapes.push(format!(
                "disc(center {}, radius {radius})",
                fmt_complex(*center)
            )),
            Primitive::SampleCloud { points, resolution } => shapes.push(format!(
                "sample cloud of {} points (resolution {resolution:e})",
                points.len()
            )),
        }
    }
    let mut out = String::new();
    if !points.is_empty() {
        let shown: Vec<String> = points.iter().take(limit).map(|z| fmt_complex(*z)).collect();
        out.push('{');
        out.push_str(&shown.join(", "));
        if points.len() > limit {
            let _ = write!(out, ", … (+{} more)", points.len() - limit);
        }
        out.push('}');
    }
    // Long polylines are summarized too.
    let segments = shapes.iter().filter(|s| s.starts_with("segment")).count();
    let mut listed = shapes.clone();
    if segments > limit {
        listed.retain(|s| !s.starts_with("segment"));
        listed.push(format!("{segments} segments"));
    }
    for s in listed {
        if !out.is_empty() {
            out.push_str(" ∪ ");
        }
        out.push_str(&s);
    }
    out
}

/// Text rendering of a report; `limit` caps explicit point listings.
pub struct TextReport<'a> {
    pub report: &'a SpectralReport,
    pub limit: usize,
}

impl fmt::Display for TextReport<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.report;
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "operator: {}", r.label)?;
        if r.estimated {
            writeln!(
                f,
                "note: sampled or discretized inputs; values are estimates"
            )?;
        }
        writeln!(f, "norm: {}", r.norm)?;
        writeln!(f, "essential_norm: {}", r.essential_norm)?;
        writeln!(
            f,
            "essential_spectral_radius: {}",
            r.essential_spectral_radius
        )?;
        writeln!(f, "spectrum: {}", describe_set(&r.spectrum, self.limit))?;
        writeln!(
            f,
            "essential_spectrum: {}",
            describe_set(&r.essential_spectrum, self.limit)
        )?;
        if let Some(points) = &r.atomic_cluster_points {
            let set = SpectralSet::points(points.iter().copied());
            writeln!(
                f,
                "atomic_cluster_points: {}",
                describe_set(&set, self.limit)
            )?;
        }
        writeln!(f, "compact: {}", yn(r.compact))?;
        writeln!(
            f,
            "essentially_quasinilpotent: {}",
            yn(r.essentially_quasinilpotent)
        )?;
        writeln!(f, "invertible: {}", yn(r.invertible))?;
        for q in &r.fredholm {
            writeln!(f, "fredholm at {}: {}", fmt_complex(q.mu), yn(q.fredholm))?;
        }
        writeln!(f, "decomposable: {}", yn(r.decomposable))?;
        writeln!(f, "tolerance: {:e}", r.tolerance)
    }
}

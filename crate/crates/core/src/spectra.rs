//! Compact subsets of the complex plane as finite unions of primitives.
//!
//! Sets are never simplified or merged. Two sets are "equal" only in the
//! sense that `contains`/`distance` agree on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("spectral set is empty")]
    EmptySet,
    #[error("invalid primitive: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Primitive {
    Point {
        z: Complex64,
    },
    Segment {
        a: Complex64,
        b: Complex64,
    },
    ClosedDisc {
        center: Complex64,
        radius: f64,
    },
    /// Finitely many samples of a region; every point of the region lies
    /// within `resolution` of some sample.
    SampleCloud {
        points: Vec<Complex64>,
        resolution: f64,
    },
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl Primitive {
    pub fn validate(&self) -> Result<(), SpectraError> {
        let ok = match self {
            Primitive::Point { z } => finite(*z),
            Primitive::Segment { a, b } => finite(*a) && finite(*b),
            Primitive::ClosedDisc { center, radius } => {
                finite(*center) && radius.is_finite() && *radius >= 0.0
            }
            Primitive::SampleCloud { points, resolution } => {
                if points.is_empty() {
                    return Err(SpectraError::Invalid("sample cloud has no points".into()));
                }
                points.iter().all(|z| finite(*z)) && resolution.is_finite() && *resolution >= 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(SpectraError::Invalid(format!("{self:?}")))
        }
    }

    pub fn sup_modulus(&self) -> f64 {
        match self {
            Primitive::Point { z } => z.norm(),
            // |.| is convex, so its max over a segment sits at an endpoint.
            Primitive::Segment { a, b } => a.norm().max(b.norm()),
            Primitive::ClosedDisc { center, radius } => center.norm() + radius,
            Primitive::SampleCloud { points, resolution } => {
                points.iter().map(|z| z.norm()).fold(0.0, f64::max) + resolution
            }
        }
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        match self {
            Primitive::Point { z: p } => (z - p).norm(),
            Primitive::Segment { a, b } => segment_distance(*a, *b, z),
            Primitive::ClosedDisc { center, radius } => ((z - center).norm() - radius).max(0.0),
            Primitive::SampleCloud { points, resolution } => {
                let nearest = points
                    .iter()
                    .map(|p| (z - p).norm())
                    .fold(f64::INFINITY, f64::min);
                (nearest - resolution).max(0.0)
            }
        }
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64, radius_factor: f64) -> Primitive {
        match self {
            Primitive::Point { z } => Primitive::Point { z: f(*z) },
            Primitive::Segment { a, b } => Primitive::Segment { a: f(*a), b: f(*b) },
            Primitive::ClosedDisc { center, radius } => Primitive::ClosedDisc {
                center: f(*center),
                radius: radius * radius_factor,
            },
            Primitive::SampleCloud { points, resolution } => Primitive::SampleCloud {
                points: points.iter().map(|z| f(*z)).collect(),
                resolution: resolution * radius_factor,
            },
        }
    }

    fn sample_into(&self, per_primitive: usize, out: &mut Vec<Complex64>) {
        let k = per_primitive.max(1);
        match self {
            Primitive::Point { z } => out.push(*z),
            Primitive::Segment { a, b } => {
                if k == 1 {
                    out.push(*a);
                } else {
                    out.extend((0..k).map(|j| a + (b - a) * (j as f64 / (k - 1) as f64)));
                }
            }
            Primitive::ClosedDisc { center, radius } => {
                out.push(*center);
                let rings = (k as f64).sqrt().ceil() as usize;
                let per_ring = k.div_ceil(rings);
                for r in 1..=rings {
                    let rho = radius * r as f64 / rings as f64;
                    for j in 0..per_ring {
                        let theta = std::f64::consts::TAU * j as f64 / per_ring as f64;
                        out.push(center + Complex64::from_polar(rho, theta));
                    }
                }
            }
            Primitive::SampleCloud { points, .. } => {
                let step = points.len().div_ceil(k).max(1);
                out.extend(points.iter().step_by(step).copied());
            }
        }
    }
}

fn segment_distance(a: Complex64, b: Complex64, z: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = ((z - a) * d.conj()).re / len2;
    let t = t.clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectralSet {
    parts: Vec<Primitive>,
}

impl SpectralSet {
    pub fn empty() -> SpectralSet {
        SpectralSet::default()
    }

    pub fn new(parts: Vec<Primitive>) -> Result<SpectralSet, SpectraError> {
        for p in &parts {
            p.validate()?;
        }
        Ok(SpectralSet { parts })
    }

    pub fn point(z: Complex64) -> SpectralSet {
        SpectralSet {
            parts: vec![Primitive::Point { z }],
        }
    }

    pub fn points(zs: impl IntoIterator<Item = Complex64>) -> SpectralSet {
        SpectralSet {
            parts: zs.into_iter().map(|z| Primitive::Point { z }).collect(),
        }
    }

    pub fn segment(a: Complex64, b: Complex64) -> SpectralSet {
        SpectralSet {
            parts: vec![Primitive::Segment { a, b }],
        }
    }

    pub fn disc(center: Complex64, radius: f64) -> SpectralSet {
        SpectralSet {
            parts: vec![Primitive::ClosedDisc { center, radius }],
        }
    }

    pub fn parts(&self) -> &[Primitive] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn has_sample_cloud(&self) -> bool {
        self.parts
            .iter()
            .any(|p| matches!(p, Primitive::SampleCloud { .. }))
    }

    pub fn validate(&self) -> Result<(), SpectraError> {
        self.parts.iter().try_for_each(Primitive::validate)
    }

    pub fn push(&mut self, p: Primitive) {
        self.parts.push(p);
    }

    pub fn union(&self, other: &SpectralSet) -> SpectralSet {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        SpectralSet { parts }
    }

    /// Largest modulus over the set; `0` for the empty set.
    pub fn sup_modulus(&self) -> f64 {
        self.parts
            .iter()
            .map(Primitive::sup_modulus)
            .fold(0.0, f64::max)
    }

    /// Like [`sup_modulus`](Self::sup_modulus) but refuses the empty set.
    pub fn try_sup_modulus(&self) -> Result<f64, SpectraError> {
        if self.is_empty() {
            Err(SpectraError::EmptySet)
        } else {
            Ok(self.sup_modulus())
        }
    }

    pub fn distance(&self, z: Complex64) -> Result<f64, SpectraError> {
        if self.is_empty() {
            return Err(SpectraError::EmptySet);
        }
        Ok(self
            .parts
            .iter()
            .map(|p| p.distance(z))
            .fold(f64::INFINITY, f64::min))
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.distance(z).is_ok_and(|d| d <= tol)
    }

    /// The image of the set under `z -> z + delta`.
    pub fn translate(&self, delta: Complex64) -> SpectralSet {
        SpectralSet {
            parts: self
                .parts
                .iter()
                .map(|p| p.map(|z| z + delta, 1.0))
                .collect(),
        }
    }

    /// The image of the set under `z -> alpha * z`.
    pub fn scale(&self, alpha: Complex64) -> SpectralSet {
        let factor = alpha.norm();
        SpectralSet {
            parts: self
                .parts
                .iter()
                .map(|p| p.map(|z| alpha * z, factor))
                .collect(),
        }
    }

    /// Deterministic points of the set (up to cloud resolution), roughly
    /// `per_primitive` from each primitive.
    pub fn sample_points(&self, per_primitive: usize) -> Vec<Complex64> {
        let mut out = Vec::new();
        for p in &self.parts {
            p.sample_into(per_primitive, &mut out);
        }
        out
    }
}

//! Abstract multiplication operators and their spectral quantities.
//!
//! A [`CenterOperator`] is described by its parts: the multiplier family of
//! the atomic part and the spectrum of the non-atomic part. On the
//! non-atomic band the essential spectrum coincides with the spectrum and
//! the essential norm with the norm, so a compact subset of the plane is all
//! that part needs. On the atomic band everything is read off the symbol
//! along the Fréchet filter. The whole operator then satisfies
//!
//! ```text
//! σ_e(T) = σ_e(T_A) ∪ σ(T_{A^d})
//! ‖T‖_e  = r_e(T) = max(limsup |λ_a|, ‖T_{A^d}‖)
//! ```
//!
//! An absent atomic part means the lattice has no atoms; an absent
//! non-atomic part means it is purely atomic.

use num_complex::Complex64;
use thiserror::Error;

use crate::config::{AnalysisConfig, ConfigError};
use crate::frechet::{cluster_points, limsup_modulus, ClusterEstimate};
use crate::spectra::{SpectraError, SpectralSet};
use crate::symbol::{AtomicSymbol, SymbolError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("operator needs an atomic part, a non-atomic part, or both")]
    NoParts,
    #[error("non-atomic spectrum must be non-empty")]
    EmptyNonatomic,
    #[error("atomic part: {0}")]
    Symbol(#[from] SymbolError),
    #[error("non-atomic part: {0}")]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("operator has no atomic part to split off")]
    MissingAtomicPart,
    #[error(
        "atomic part is not compact (limsup |λ| = {limsup} > {tol:e}); no compact split exists"
    )]
    NotDecomposable { limsup: f64, tol: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CenterOperator {
    label: String,
    atomic: Option<AtomicSymbol>,
    nonatomic: Option<SpectralSet>,
    approximate: bool,
}

impl CenterOperator {
    pub fn new(
        label: impl Into<String>,
        atomic: Option<AtomicSymbol>,
        nonatomic: Option<SpectralSet>,
    ) -> Result<CenterOperator, OperatorError> {
        if atomic.is_none() && nonatomic.is_none() {
            return Err(OperatorError::NoParts);
        }
        if let Some(sym) = &atomic {
            sym.validate()?;
        }
        if let Some(set) = &nonatomic {
            if set.is_empty() {
                return Err(OperatorError::EmptyNonatomic);
            }
            set.validate()?;
        }
        Ok(CenterOperator {
            label: label.into(),
            atomic,
            nonatomic,
            approximate: false,
        })
    }

    pub fn atomic(
        label: impl Into<String>,
        sym: AtomicSymbol,
    ) -> Result<CenterOperator, OperatorError> {
        CenterOperator::new(label, Some(sym), None)
    }

    pub fn nonatomic(
        label: impl Into<String>,
        set: SpectralSet,
    ) -> Result<CenterOperator, OperatorError> {
        CenterOperator::new(label, None, Some(set))
    }

    /// Marks a part as a discretization of the true operator, so reports
    /// carry the estimated flag even when every primitive is exact.
    pub fn mark_approximate(mut self) -> CenterOperator {
        self.approximate = true;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn atomic_part(&self) -> Option<&AtomicSymbol> {
        self.atomic.as_ref()
    }

    pub fn nonatomic_part(&self) -> Option<&SpectralSet> {
        self.nonatomic.as_ref()
    }

    /// Any part comes from sampling (a generator symbol or a sample cloud).
    pub fn has_sampled_inputs(&self) -> bool {
        self.atomic.as_ref().is_some_and(AtomicSymbol::is_estimated)
            || self
                .nonatomic
                .as_ref()
                .is_some_and(SpectralSet::has_sample_cloud)
    }

    pub fn is_estimated(&self) -> bool {
        self.approximate || self.has_sampled_inputs()
    }

    /// Sampled inputs get the coarse tolerance; discretized but exact
    /// primitives keep the fine one.
    pub fn tolerance(&self, cfg: &AnalysisConfig) -> f64 {
        cfg.tolerance_for(self.has_sampled_inputs())
    }

    fn nonatomic_sup(&self) -> f64 {
        self.nonatomic
            .as_ref()
            .map_or(0.0, SpectralSet::sup_modulus)
    }

    /// `‖T‖ = r(T)`: the sup-modulus over both parts.
    pub fn norm(&self) -> f64 {
        let atomic = self.atomic.as_ref().map_or(0.0, AtomicSymbol::sup_modulus);
        atomic.max(self.nonatomic_sup())
    }

    pub fn spectrum(&self, cfg: &AnalysisConfig) -> SpectralSet {
        let atomic = self
            .atomic
            .as_ref()
            .map(|s| s.values_closure(cfg))
            .unwrap_or_default();
        atomic.union(&self.nonatomic.clone().unwrap_or_default())
    }

    pub fn atomic_clusters(&self, cfg: &AnalysisConfig) -> Option<ClusterEstimate> {
        self.atomic.as_ref().map(|s| cluster_points(s, cfg))
    }

    /// Cluster points of the symbol together with the non-atomic spectrum.
    pub fn essential_spectrum(&self, cfg: &AnalysisConfig) -> SpectralSet {
        let atomic = self
            .atomic_clusters(cfg)
            .map(|c| SpectralSet::points(c.points))
            .unwrap_or_default();
        atomic.union(&self.nonatomic.clone().unwrap_or_default())
    }

    /// `‖T‖_e`, equal to the essential spectral radius.
    pub fn essential_norm(&self) -> f64 {
        let atomic = self.atomic.as_ref().map_or(0.0, limsup_modulus);
        atomic.max(self.nonatomic_sup())
    }

    pub fn essential_spectral_radius(&self) -> f64 {
        self.essential_norm()
    }

    pub fn is_compact(&self, cfg: &AnalysisConfig) -> bool {
        let tol = self.tolerance(cfg);
        let atomic_ok = self
            .atomic
            .as_ref()
            .is_none_or(|s| limsup_modulus(s) <= tol);
        atomic_ok && self.nonatomic_sup() <= tol
    }

    /// Whether `T - mu I` is Fredholm, i.e. `mu` is outside the essential spectrum.
    pub fn is_fredholm(&self, mu: Complex64, cfg: &AnalysisConfig) -> bool {
        match self.essential_spectrum(cfg).distance(mu) {
            Ok(d) => d > self.tolerance(cfg),
            Err(SpectraError::EmptySet) => true,
            Err(_) => unreachable!("distance only fails on the empty set"),
        }
    }

    /// `|T| >= cI` for some `c > 0`, i.e. `0` is outside the spectrum.
    pub fn is_invertible(&self, cfg: &AnalysisConfig) -> bool {
        self.spectrum(cfg)
            .distance(Complex64::new(0.0, 0.0))
            .is_ok_and(|d| d > self.tolerance(cfg))
    }

    pub fn is_essentially_quasinilpotent(&self, cfg: &AnalysisConfig) -> bool {
        self.essential_norm() <= self.tolerance(cfg)
    }

    /// Splits `T = T1 + T2` with `T1` compact carrying the atomic part and
    /// `T2` carrying the non-atomic part. Possible only when the atomic part
    /// is compact.
    pub fn decompose(
        &self,
        cfg: &AnalysisConfig,
    ) -> Result<(CenterOperator, CenterOperator), OperatorError> {
        let sym = self
            .atomic
            .as_ref()
            .ok_or(OperatorError::MissingAtomicPart)?;
        let tol = self.tolerance(cfg);
        let limsup = limsup_modulus(sym);
        if limsup > tol {
            return Err(OperatorError::NotDecomposable { limsup, tol });
        }
        let mut t1 = CenterOperator::new(
            format!("{} (compact part)", self.label),
            Some(sym.clone()),
            None,
        )?;
        t1.approximate = self.approximate;
        let mut t2 = match &self.nonatomic {
            Some(set) => CenterOperator::new(
                format!("{} (non-atomic part)", self.label),
                None,
                Some(set.clone()),
            )?,
            None => CenterOperator::new(
                format!("{} (non-atomic part)", self.label),
                Some(AtomicSymbol::EventuallyZero { prefix: Vec::new() }),
                None,
            )?,
        };
        t2.approximate = self.approximate;
        Ok((t1, t2))
    }

    /// `T - mu I`.
    pub fn shifted(&self, mu: Complex64) -> Result<CenterOperator, OperatorError> {
        self.affine(Complex64::new(1.0, 0.0), -mu)
    }

    /// `alpha T`.
    pub fn scaled(&self, alpha: Complex64) -> Result<CenterOperator, OperatorError> {
        self.affine(alpha, Complex64::new(0.0, 0.0))
    }

    fn affine(&self, alpha: Complex64, shift: Complex64) -> Result<CenterOperator, OperatorError> {
        let atomic = self
            .atomic
            .as_ref()
            .map(|s| s.affine(alpha, shift))
            .transpose()?;
        let nonatomic = self
            .nonatomic
            .as_ref()
            .map(|s| s.scale(alpha).translate(shift));
        let mut out = CenterOperator::new(self.label.clone(), atomic, nonatomic)?;
        out.approximate = self.approximate;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::symbol::GeneratorSymbol;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn gen(text: &str) -> AtomicSymbol {
        AtomicSymbol::Generator(GeneratorSymbol::new(parse(text, "n").unwrap(), 10_000).unwrap())
    }

    fn alternating() -> AtomicSymbol {
        AtomicSymbol::EventuallyPeriodic {
            prefix: vec![],
            period: vec![r(-1.0), r(1.0)],
        }
    }

    fn one_plus_recip() -> AtomicSymbol {
        AtomicSymbol::ConvergentTail {
            prefix: (1..=50).map(|n| r(1.0 + 1.0 / n as f64)).collect(),
            limit: r(1.0),
        }
    }

    fn recip() -> AtomicSymbol {
        AtomicSymbol::ConvergentTail {
            prefix: (1..=50).map(|n| r(1.0 / n as f64)).collect(),
            limit: r(0.0),
        }
    }

    fn unit_segment() -> SpectralSet {
        SpectralSet::segment(r(0.0), r(1.0))
    }

    #[test]
    fn needs_a_part() {
        assert_eq!(
            CenterOperator::new("t", None, None),
            Err(OperatorError::NoParts)
        );
        assert_eq!(
            CenterOperator::new("t", None, Some(SpectralSet::empty())),
            Err(OperatorError::EmptyNonatomic)
        );
    }

    #[test]
    fn norm_is_max_of_parts() {
        let seg = SpectralSet::segment(r(0.0), r(1.5));
        assert_eq!(
            CenterOperator::atomic("a", alternating()).unwrap().norm(),
            1.0
        );
        assert_eq!(
            CenterOperator::nonatomic("b", seg.clone()).unwrap().norm(),
            1.5
        );
        assert_eq!(
            CenterOperator::new("c", Some(alternating()), Some(seg))
                .unwrap()
                .norm(),
            1.5
        );
    }

    #[test]
    fn spectrum_examples() {
        let cfg = AnalysisConfig::default();
        let t = CenterOperator::atomic("recip", gen("1/n")).unwrap();
        let s = t.spectrum(&cfg);
        assert!(s.contains(r(0.0), cfg.sampled_tolerance) && s.contains(r(1.0), 0.0));
        assert_eq!(s.sup_modulus(), 1.0 + cfg.sampled_tolerance);

        let t = CenterOperator::nonatomic("seg", unit_segment()).unwrap();
        assert_eq!(t.spectrum(&cfg), unit_segment());

        let t = CenterOperator::new("mix", Some(alternating()), Some(SpectralSet::point(r(3.0))))
            .unwrap();
        let s = t.spectrum(&cfg);
        for z in [-1.0, 1.0, 3.0] {
            assert!(s.contains(r(z), 0.0));
        }
        assert!(!s.contains(r(0.0), 0.5));
    }

    #[test]
    fn essential_spectrum_examples() {
        let cfg = AnalysisConfig::default();
        let t = CenterOperator::atomic("t", one_plus_recip()).unwrap();
        assert_eq!(t.essential_spectrum(&cfg), SpectralSet::point(r(1.0)));

        let t = CenterOperator::new("t", Some(alternating()), Some(unit_segment())).unwrap();
        let s = t.essential_spectrum(&cfg);
        assert!(s.contains(r(-1.0), 0.0) && s.contains(r(0.5), 0.0) && s.contains(r(1.0), 0.0));
        assert!(!s.contains(r(-0.5), 0.1));

        let t = CenterOperator::atomic(
            "t",
            AtomicSymbol::Finite {
                values: vec![r(1.0), r(2.0)],
            },
        )
        .unwrap();
        assert!(t.essential_spectrum(&cfg).is_empty());
    }

    #[test]
    fn essential_norm_examples() {
        let two_plus_recip = AtomicSymbol::ConvergentTail {
            prefix: (1..=20).map(|n| r(2.0 + 1.0 / n as f64)).collect(),
            limit: r(2.0),
        };
        let t = CenterOperator::new(
            "t",
            Some(two_plus_recip),
            Some(SpectralSet::segment(r(0.0), r(1.5))),
        )
        .unwrap();
        assert_eq!(t.essential_norm(), 2.0);
        assert_eq!(t.essential_spectral_radius(), 2.0);
        assert_eq!(
            CenterOperator::atomic("t", recip())
                .unwrap()
                .essential_norm(),
            0.0
        );
    }

    #[test]
    fn compactness() {
        let cfg = AnalysisConfig::default();
        assert!(CenterOperator::atomic("t", recip())
            .unwrap()
            .is_compact(&cfg));
        assert!(CenterOperator::atomic("t", gen("1/n"))
            .unwrap()
            .is_compact(&cfg));
        assert!(!CenterOperator::atomic("t", alternating())
            .unwrap()
            .is_compact(&cfg));
        assert!(!CenterOperator::nonatomic("t", unit_segment())
            .unwrap()
            .is_compact(&cfg));
        assert!(CenterOperator::nonatomic("t", SpectralSet::point(r(0.0)))
            .unwrap()
            .is_compact(&cfg));
    }

    #[test]
    fn fredholm_points() {
        let cfg = AnalysisConfig::default();
        let t = CenterOperator::atomic("t", one_plus_recip()).unwrap();
        assert!(!t.is_fredholm(r(1.0), &cfg));
        assert!(t.is_fredholm(r(0.0), &cfg));
        let t = CenterOperator::nonatomic("t", unit_segment()).unwrap();
        assert!(t.is_fredholm(Complex64::new(0.0, 2.0), &cfg));
        let t = CenterOperator::atomic(
            "t",
            AtomicSymbol::Finite {
                values: vec![r(0.0)],
            },
        )
        .unwrap();
        assert!(t.is_fredholm(r(0.0), &cfg));
    }

    #[test]
    fn invertibility() {
        let cfg = AnalysisConfig::default();
        assert!(CenterOperator::atomic("t", one_plus_recip())
            .unwrap()
            .is_invertible(&cfg));
        assert!(!CenterOperator::atomic("t", recip())
            .unwrap()
            .is_invertible(&cfg));
        assert!(!CenterOperator::atomic("t", gen("1/n"))
            .unwrap()
            .is_invertible(&cfg));
        assert!(
            CenterOperator::nonatomic("t", SpectralSet::disc(r(3.0), 1.0))
                .unwrap()
                .is_invertible(&cfg)
        );
    }

    #[test]
    fn decompose_compact_atomic_part() {
        let cfg = AnalysisConfig::default();
        let t = CenterOperator::new("t", Some(recip()), Some(unit_segment())).unwrap();
        let (t1, t2) = t.decompose(&cfg).unwrap();
        assert_eq!(t1.atomic_part(), Some(&recip()));
        assert!(t1.nonatomic_part().is_none());
        assert!(t1.is_compact(&cfg));
        assert!(t2.atomic_part().is_none());
        assert_eq!(t2.nonatomic_part(), Some(&unit_segment()));
        assert_eq!(t2.essential_norm(), t.essential_norm());
        let union = t1.spectrum(&cfg).union(&t2.spectrum(&cfg));
        for z in t.spectrum(&cfg).sample_points(32) {
            assert!(union.contains(z, 1e-12));
        }
        for z in union.sample_points(32) {
            assert!(t.spectrum(&cfg).contains(z, 1e-12));
        }
    }

    #[test]
    fn decompose_rejects_noncompact_atomic_part() {
        let cfg = AnalysisConfig::default();
        let t = CenterOperator::new("t", Some(alternating()), Some(unit_segment())).unwrap();
        assert!(matches!(
            t.decompose(&cfg),
            Err(OperatorError::NotDecomposable { .. })
        ));
        let t = CenterOperator::nonatomic("t", unit_segment()).unwrap();
        assert_eq!(
            t.decompose(&cfg).unwrap_err(),
            OperatorError::MissingAtomicPart
        );
    }

    #[test]
    fn decompose_purely_atomic() {
        let cfg = AnalysisConfig::default();
        let ez = AtomicSymbol::EventuallyZero {
            prefix: vec![r(2.0)],
        };
        let t = CenterOperator::atomic("t", ez.clone()).unwrap();
        let (t1, t2) = t.decompose(&cfg).unwrap();
        assert_eq!(t1.atomic_part(), Some(&ez));
        assert_eq!(t2.norm(), 0.0);
        assert!(t2.nonatomic_part().is_none());
    }

    #[test]
    fn essential_quasinilpotency() {
        let cfg = AnalysisConfig::default();
        let t = CenterOperator::atomic("t", recip()).unwrap();
        assert!(t.is_essentially_quasinilpotent(&cfg) && t.is_compact(&cfg));
        assert!(!CenterOperator::nonatomic("t", unit_segment())
            .unwrap()
            .is_essentially_quasinilpotent(&cfg));
        assert!(!CenterOperator::atomic("t", one_plus_recip())
            .unwrap()
            .is_essentially_quasinilpotent(&cfg));
    }

    #[test]
    fn shift_moves_essential_spectrum() {
        let cfg = AnalysisConfig::default();
        let mu = Complex64::new(0.25, -1.0);
        let t = CenterOperator::new("t", Some(alternating()), Some(unit_segment())).unwrap();
        let moved = t.shifted(mu).unwrap().essential_spectrum(&cfg);
        let expected = t.essential_spectrum(&cfg).translate(-mu);
        for z in expected.sample_points(64) {
            assert!(moved.contains(z, 1e-12));
        }
        for z in moved.sample_points(64) {
            assert!(expected.contains(z, 1e-12));
        }
    }

    #[test]
    fn estimated_flag() {
        assert!(!CenterOperator::atomic("t", recip()).unwrap().is_estimated());
        assert!(CenterOperator::atomic("t", gen("1/n"))
            .unwrap()
            .is_estimated());
        assert!(CenterOperator::atomic("t", recip())
            .unwrap()
            .mark_approximate()
            .is_estimated());
    }
}

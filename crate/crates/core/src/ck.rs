//! The `C(K)` lattice whose atomic part is not a projection band.
//!
//! `K = ∪ I_n ∪ {x_n} ∪ {0}` with `x_n = 2^-(n+1)` and
//! `I_n = [1/(2^(n+1) + 2), 1/(2^(n+1) + 1)]`. The positive norm-one atoms of
//! `C(K)` are the point masses at the isolated points `x_n`, and the
//! multiplication operator `T_p f = p f` acts on them by `λ_n = p(x_n)`.
//! Its non-atomic part lives on `∪ I_n ∪ {0}`.
//!
//! The image `p(I_n)` is approximated by the polyline through
//! `samples_per_interval` equally spaced values. The sup-modulus of a
//! polyline is attained at a vertex, so for `p` monotone in modulus on each
//! interval (e.g. affine `p`) the essential norm comes out exact.

use num_complex::Complex64;
use thiserror::Error;

use crate::expr::{Expr, ExprError};
use crate::operator::{CenterOperator, OperatorError};
use crate::spectra::{Primitive, SpectralSet};
use crate::symbol::AtomicSymbol;

/// Beyond this `2^(n+1) + 2` is no longer an exact double.
pub const MAX_INTERVALS: usize = 50;

#[derive(Debug, Error)]
pub enum CkError {
    #[error("n_max must lie in 1..={MAX_INTERVALS}, got {0}")]
    IntervalCount(usize),
    #[error("samples_per_interval must be at least 2, got {0}")]
    SampleCount(usize),
    #[error("p({x}): {source}")]
    Eval { x: f64, source: ExprError },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// `x_n = 1 / 2^(n+1)`.
pub fn atom_point(n: usize) -> f64 {
    1.0 / 2f64.powi(n as i32 + 1)
}

/// `I_n` as `(left, right)`.
pub fn interval(n: usize) -> (f64, f64) {
    let m = 2f64.powi(n as i32 + 1);
    (1.0 / (m + 2.0), 1.0 / (m + 1.0))
}

#[derive(Debug, Clone)]
pub struct CkExample {
    pub p: Expr,
    pub n_max: usize,
    pub samples_per_interval: usize,
}

impl CkExample {
    pub fn new(p: Expr, n_max: usize, samples_per_interval: usize) -> Result<CkExample, CkError> {
        if n_max == 0 || n_max > MAX_INTERVALS {
            return Err(CkError::IntervalCount(n_max));
        }
        if samples_per_interval < 2 {
            return Err(CkError::SampleCount(samples_per_interval));
        }
        Ok(CkExample {
            p,
            n_max,
            samples_per_interval,
        })
    }

    fn p(&self, x: f64) -> Result<Complex64, CkError> {
        self.p
            .eval_real(x)
            .map_err(|source| CkError::Eval { x, source })
    }

    /// `λ_n = p(x_n)` with the exact limit `p(0)`.
    pub fn atomic_symbol(&self) -> Result<AtomicSymbol, CkError> {
        let prefix = (1..=self.n_max)
            .map(|n| self.p(atom_point(n)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AtomicSymbol::ConvergentTail {
            prefix,
            limit: self.p(0.0)?,
        })
    }

    /// `p(∪ I_n ∪ {0})`, one polyline per interval plus the point `p(0)`.
    pub fn nonatomic_set(&self) -> Result<SpectralSet, CkError> {
        let mut set = SpectralSet::empty();
        let k = self.samples_per_interval;
        for n in 1..=self.n_max {
            let (a, b) = interval(n);
            let xs = (0..k).map(|j| {
                if j + 1 == k {
                    b
                } else {
                    a + (b - a) * j as f64 / (k - 1) as f64
                }
            });
            let values = xs.map(|x| self.p(x)).collect::<Result<Vec<_>, _>>()?;
            for w in values.windows(2) {
                set.push(Primitive::Segment { a: w[0], b: w[1] });
            }
        }
        set.push(Primitive::Point { z: self.p(0.0)? });
        Ok(set)
    }

    pub fn operator(&self) -> Result<CenterOperator, CkError> {
        let op = CenterOperator::new(
            format!("C(K) multiplication by p(x) = {}", self.p),
            Some(self.atomic_symbol()?),
            Some(self.nonatomic_set()?),
        )?;
        Ok(op.mark_approximate())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::AnalysisConfig;
    use crate::expr::parse;

    fn example(p: &str) -> CkExample {
        CkExample::new(parse(p, "x").unwrap(), 30, 17).unwrap()
    }

    #[test]
    fn geometry_of_k() {
        assert_eq!(atom_point(1), 0.25);
        assert_eq!(interval(1), (1.0 / 6.0, 1.0 / 5.0));
        // x_n never falls inside any I_m.
        for n in 1..=MAX_INTERVALS {
            for m in 1..=MAX_INTERVALS {
                let (a, b) = interval(m);
                let x = atom_point(n);
                assert!(x < a || x > b, "x_{n} in I_{m}");
            }
        }
    }

    #[test]
    fn identity_function() {
        // Oracle: |x| is increasing, so its max over ∪ I_n ∪ {0} is the right endpoint of I_1.
        let oracle = interval(1).1;
        let op = example("x").operator().unwrap();
        assert!((op.essential_norm() - oracle).abs() <= 1e-9);
        assert!((op.essential_norm() - 0.2).abs() <= 1e-9);
        let cfg = AnalysisConfig::default();
        assert_eq!(
            op.atomic_clusters(&cfg).unwrap().points,
            vec![Complex64::new(0.0, 0.0)]
        );
        assert!(op.decompose(&cfg).is_ok());
    }

    #[test]
    fn constant_function() {
        let op = example("1").operator().unwrap();
        assert_eq!(op.essential_norm(), 1.0);
        assert!(op.decompose(&AnalysisConfig::default()).is_err());
    }

    #[test]
    fn logistic_function() {
        // x(1-x) is increasing on [0, 1/2], so the max sits at x = 1/5: 0.16.
        let op = example("x*(1-x)").operator().unwrap();
        assert!((op.essential_norm() - 0.16).abs() <= 1e-9);
    }

    #[test]
    fn argument_checks() {
        let p = parse("x", "x").unwrap();
        assert!(matches!(
            CkExample::new(p.clone(), 0, 4),
            Err(CkError::IntervalCount(0))
        ));
        assert!(matches!(
            CkExample::new(p.clone(), 51, 4),
            Err(CkError::IntervalCount(51))
        ));
        assert!(matches!(
            CkExample::new(p, 3, 1),
            Err(CkError::SampleCount(1))
        ));
        let bad = CkExample::new(parse("1/x", "x").unwrap(), 3, 4).unwrap();
        assert!(matches!(bad.operator(), Err(CkError::Eval { x, .. }) if x == 0.0));
    }
}

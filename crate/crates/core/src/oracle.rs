//! Brute-force checks for the closed forms in [`frechet`](crate::frechet)
//! and [`operator`](crate::operator).
//!
//! The removal oracle relies on one observation: among all `g` supported on
//! at most `k` atoms, `sup |f - g|` is smallest when `g` cancels the `k`
//! largest entries of `|f|`, leaving the `(k+1)`-th largest. That is the same
//! reduction the quotient-norm identity rests on, so the oracle is
//! independent of the limsup code path but not of the mathematics.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frechet::dedup_points;
use crate::grid::{self, Grid};
use crate::symbol::{AtomicSymbol, SymbolError};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("removal budget {budget} must be smaller than the {samples} samples")]
    BudgetExceedsSamples { budget: usize, samples: usize },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("eps must be positive, got {0}")]
    InvalidEps(f64),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: f64,
    pub budget: usize,
    pub converged: bool,
    /// `(k, value after removing k entries)`, non-increasing in value.
    pub history: Vec<(usize, f64)>,
}

impl OracleResult {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), OracleError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["removed", "value"])?;
        for (k, v) in &self.history {
            w.write_record([k.to_string(), format!("{v:e}")])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// `inf { sup |f - g| : g supported on at most k_max atoms }` by order statistics.
pub fn quotient_norm_oracle(
    samples: &[Complex64],
    k_max: usize,
) -> Result<OracleResult, OracleError> {
    if k_max >= samples.len() {
        return Err(OracleError::BudgetExceedsSamples {
            budget: k_max,
            samples: samples.len(),
        });
    }
    let mut moduli: Vec<f64> = samples.iter().map(|z| z.norm()).collect();
    let keep = k_max + 1;
    let descending = |a: &f64, b: &f64| b.total_cmp(a);
    if keep < moduli.len() {
        moduli.select_nth_unstable_by(keep - 1, descending);
        moduli.truncate(keep);
    }
    moduli.sort_unstable_by(descending);
    let history: Vec<(usize, f64)> = moduli.iter().copied().enumerate().collect();
    let value = moduli[k_max];
    let half = moduli[k_max / 2];
    Ok(OracleResult {
        value,
        budget: k_max,
        converged: half - value <= 1e-9 * value.max(1.0),
        history,
    })
}

/// Points that recur within `eps` in every one of `checkpoints` consecutive
/// blocks of the tail half of `samples`.
pub fn cluster_oracle(
    samples: &[Complex64],
    eps: f64,
    checkpoints: usize,
) -> Result<Vec<Complex64>, OracleError> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(OracleError::InvalidEps(eps));
    }
    let needed = 2 * checkpoints.max(1);
    if samples.len() < needed {
        return Err(OracleError::TooFewSamples {
            needed,
            got: samples.len(),
        });
    }
    Ok(block_clusters(
        &samples[samples.len() / 2..],
        eps,
        checkpoints,
    ))
}

/// The block test behind [`cluster_oracle`], applied to the whole `window`.
pub(crate) fn block_clusters(window: &[Complex64], eps: f64, checkpoints: usize) -> Vec<Complex64> {
    let blocks = checkpoints.clamp(1, window.len().max(1));
    if window.is_empty() {
        return Vec::new();
    }
    let bounds: Vec<usize> = (0..=blocks).map(|j| j * window.len() / blocks).collect();
    let grids: Vec<Grid> = bounds
        .windows(2)
        .map(|w| {
            let mut g = Grid::new(eps);
            window[w[0]..w[1]].iter().for_each(|z| g.insert(*z));
            g
        })
        .collect();
    let last = &window[bounds[blocks - 1]..];
    let candidates = grid::thin(last.iter().copied(), eps / 2f64.sqrt());
    let survivors = candidates
        .into_iter()
        .filter(|z| grids.iter().all(|g| g.any_within(*z, eps)))
        .collect();
    dedup_points(survivors, eps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCheck {
    /// `(N, sup_{n > N} |λ_n|)`, one entry per requested `N`.
    pub bounds: Vec<(usize, f64)>,
    /// The bound at the largest requested `N` is at most `tol`.
    pub compact_consistent: bool,
}

/// Norm distance from `T_A` to its rank-`N` diagonal truncation, for each `N`.
pub fn compact_tail_check(sym: &AtomicSymbol, cutoffs: &[usize], tol: f64) -> TailCheck {
    let mut sorted = cutoffs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let bounds: Vec<(usize, f64)> = sorted.iter().map(|&n| (n, sym.tail_sup(n))).collect();
    let compact_consistent = bounds.last().is_some_and(|&(_, b)| b <= tol);
    TailCheck {
        bounds,
        compact_consistent,
    }
}

/// `[λ_1, ..., λ_N]`, stopping early for finite symbols.
pub fn finite_section_values(sym: &AtomicSymbol, n: usize) -> Result<Vec<Complex64>, OracleError> {
    if let AtomicSymbol::Generator(g) = sym {
        if n <= g.horizon() {
            return Ok(g.samples()[..n].to_vec());
        }
    }
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        match sym.value(k)? {
            Some(z) => out.push(z),
            None => break,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::AnalysisConfig;
    use crate::expr::parse;
    use crate::frechet::{cluster_points, limsup_modulus};
    use crate::symbol::GeneratorSymbol;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn generator(text: &str, horizon: usize) -> AtomicSymbol {
        AtomicSymbol::Generator(GeneratorSymbol::new(parse(text, "n").unwrap(), horizon).unwrap())
    }

    #[test]
    fn removal_of_two_spikes() {
        let mut samples = vec![r(5.0), r(3.0)];
        samples.extend(std::iter::repeat_n(r(1.0), 98));
        let res = quotient_norm_oracle(&samples, 10).unwrap();
        assert_eq!(res.value, 1.0);
        assert_eq!(res.history[0], (0, 5.0));
        assert_eq!(res.history[1], (1, 3.0));
        assert_eq!(res.history[2], (2, 1.0));
        assert!(res.converged);
    }

    #[test]
    fn all_zero_samples() {
        let res = quotient_norm_oracle(&[r(0.0); 20], 5).unwrap();
        assert_eq!(res.value, 0.0);
    }

    #[test]
    fn budget_must_be_below_sample_count() {
        assert!(matches!(
            quotient_norm_oracle(&[r(1.0); 4], 4),
            Err(OracleError::BudgetExceedsSamples {
                budget: 4,
                samples: 4
            })
        ));
    }

    #[test]
    fn alternating_plus_reciprocal_order_statistic() {
        let sym = generator("(-1)^n + 1/n", 10_000);
        let samples = finite_section_values(&sym, 10_000).unwrap();
        // Independent route: full sort of |λ_n|. The largest moduli are
        // 1 + 1/n for even n, so the 65th largest is 1 + 1/130.
        let mut all: Vec<f64> = samples.iter().map(|z| z.norm()).collect();
        all.sort_by(|a, b| b.total_cmp(a));
        let res = quotient_norm_oracle(&samples, 64).unwrap();
        assert_eq!(res.value, all[64]);
        assert!((res.value - (1.0 + 1.0 / 130.0)).abs() <= 1e-15);
        // A budget of 600 removals brings the order statistic within 1e-3 of the limsup 1.
        let res = quotient_norm_oracle(&samples, 600).unwrap();
        assert!((res.value - 1.0).abs() <= 1e-3);
        assert!(res.value >= limsup_modulus(&sym) - 1e-3);
    }

    #[test]
    fn history_is_non_increasing() {
        let sym = generator("sin(n)*exp(i*n)/(1 + 1/n)", 2000);
        let samples = finite_section_values(&sym, 2000).unwrap();
        let res = quotient_norm_oracle(&samples, 200).unwrap();
        assert!(res.history.windows(2).all(|w| w[1].1 <= w[0].1));
    }

    #[test]
    fn clusters_of_alternating_signs() {
        let samples: Vec<Complex64> = (1..=1000)
            .map(|n| r(if n % 2 == 0 { 1.0 } else { -1.0 }))
            .collect();
        assert_eq!(
            cluster_oracle(&samples, 1e-6, 8).unwrap(),
            vec![r(1.0), r(-1.0)]
        );
    }

    #[test]
    fn clusters_of_reciprocal() {
        // Exact cluster set is {0}; the tail half of 1/n for n <= 10^4 lies
        // within [1e-4, 2e-4], so eps = 1e-3 yields one representative near 0.
        let samples: Vec<Complex64> = (1..=10_000).map(|n| r(1.0 / n as f64)).collect();
        let found = cluster_oracle(&samples, 1e-3, 8).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].norm() <= 1e-3);
        // Below the tail spacing nothing recurs in every block: no spurious points.
        assert!(cluster_oracle(&samples, 1e-6, 8).unwrap().is_empty());
    }

    #[test]
    fn clusters_of_constant() {
        let c = Complex64::new(0.5, -2.0);
        assert_eq!(cluster_oracle(&[c; 64], 1e-9, 8).unwrap(), vec![c]);
        assert!(matches!(
            cluster_oracle(&[c; 15], 1e-9, 8),
            Err(OracleError::TooFewSamples {
                needed: 16,
                got: 15
            })
        ));
    }

    #[test]
    fn cluster_oracle_agrees_with_exact_periodic_symbol() {
        let sym = AtomicSymbol::EventuallyPeriodic {
            prefix: vec![r(9.0), r(-4.0)],
            period: vec![r(0.5), Complex64::new(0.0, 1.0), r(0.5)],
        };
        let samples = finite_section_values(&sym, 5000).unwrap();
        let found = cluster_oracle(&samples, 1e-9, 8).unwrap();
        let exact = cluster_points(&sym, &AnalysisConfig::default());
        assert_eq!(found, exact.points);
    }

    #[test]
    fn tail_check_examples() {
        let recip = generator("1/n", 2000);
        let check = compact_tail_check(&recip, &[10, 100, 1000], 1e-2);
        assert_eq!(
            check.bounds,
            vec![(10, 1.0 / 11.0), (100, 1.0 / 101.0), (1000, 1.0 / 1001.0)]
        );
        assert!(check.compact_consistent);

        let alt = generator("(-1)^n", 2000);
        let check = compact_tail_check(&alt, &[10, 100, 1000], 1e-6);
        assert!(check.bounds.iter().all(|&(_, b)| b == 1.0));
        assert!(!check.compact_consistent);

        let ez = AtomicSymbol::EventuallyZero {
            prefix: vec![r(9.0); 3],
        };
        let check = compact_tail_check(&ez, &[3], 1e-6);
        assert_eq!(check.bounds, vec![(3, 0.0)]);
        assert!(check.compact_consistent);
    }

    #[test]
    fn finite_sections() {
        let recip = generator("1/n", 1000);
        assert_eq!(
            finite_section_values(&recip, 3).unwrap(),
            vec![r(1.0), r(0.5), r(1.0 / 3.0)]
        );
        let ep = AtomicSymbol::EventuallyPeriodic {
            prefix: vec![],
            period: vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)],
        };
        assert_eq!(
            finite_section_values(&ep, 4).unwrap(),
            vec![
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0)
            ]
        );
        let fin = AtomicSymbol::Finite {
            values: vec![r(2.0)],
        };
        assert_eq!(finite_section_values(&fin, 5).unwrap(), vec![r(2.0)]);
        // Beyond the horizon the expression is evaluated directly.
        assert_eq!(
            finite_section_values(&recip, 1001).unwrap()[1000],
            r(1.0 / 1001.0)
        );
    }

    #[test]
    fn csv_history() {
        let res = quotient_norm_oracle(&[r(3.0), r(2.0), r(1.0)], 1).unwrap();
        let mut buf = Vec::new();
        res.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "removed,value\n0,3e0\n1,2e0\n"
        );
    }
}

//! Spectral analysis of abstract multiplication operators.
//!
//! An operator in the center of a complex Banach lattice acts on the atoms
//! by a multiplier family `(λ_n)` and on the non-atomic band as a
//! multiplication operator whose essential spectrum equals its spectrum.
//! This crate computes the norm, spectrum, essential spectrum, essential norm
//! and essential spectral radius of such an operator, together with
//! compactness, Fredholm and invertibility predicates, and checks the closed
//! forms against brute-force oracles.
//!
//! ```
//! use latspec::{AnalysisConfig, AtomicSymbol, CenterOperator, SpectralSet};
//! use num_complex::Complex64;
//!
//! let alternating = AtomicSymbol::EventuallyPeriodic {
//!     prefix: vec![Complex64::new(3.0, 0.0)],
//!     period: vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)],
//! };
//! let segment = SpectralSet::segment(Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0));
//! let t = CenterOperator::new("demo", Some(alternating), Some(segment)).unwrap();
//!
//! assert_eq!(t.norm(), 3.0);
//! assert_eq!(t.essential_norm(), 1.0);
//! assert!(!t.is_compact(&AnalysisConfig::default()));
//! ```
//!
//! The guide in `book/` walks through the concepts with runnable snippets.

pub mod ck;
pub mod cli;
pub mod config;
pub mod expr;
pub mod frechet;
mod grid;
pub mod operator;
pub mod oracle;
pub mod report;
pub mod specfile;
pub mod spectra;
pub mod symbol;

pub use config::AnalysisConfig;
pub use expr::{parse, Expr, ExprError};
pub use frechet::{cluster_points, liminf_modulus, limsup_modulus, quotient_norm, ClusterEstimate};
pub use operator::{CenterOperator, OperatorError};
pub use report::{analyze, SpectralReport};
pub use spectra::{Primitive, SpectralSet};
pub use symbol::{AtomicSymbol, GeneratorSymbol};

/// Book chapters, compiled as doctests so their snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/expressions.md")]
    mod expressions {}
    #[doc = include_str!("../../../book/src/symbols.md")]
    mod symbols {}
    #[doc = include_str!("../../../book/src/frechet.md")]
    mod frechet {}
    #[doc = include_str!("../../../book/src/spectral-sets.md")]
    mod spectral_sets {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/ck-example.md")]
    mod ck_example {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}

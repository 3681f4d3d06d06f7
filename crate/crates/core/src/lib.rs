//! Numerical laboratory for permutation-invariant limit theorems of lacunary
//! sequences.
//!
//! The crate is organised bottom-up:
//!
//! - [`measures`]: finite atomic probability measures, mixed normals and
//!   finite random measures.
//! - [`metrics`]: exact Prohorov distance via max-flow, Strassen couplings,
//!   the quantile Wasserstein-2 distance and Kolmogorov–Smirnov distances.
//! - [`sequences`]: arbitrary-precision gap sequences, Diophantine solution
//!   counts and permutations.
//! - [`lacunary`]: fixed-point evaluation of `sum f(n_k x)` and the
//!   trigonometric CLT/LIL experiments.
//! - [`framework`]: regular weak limit theorems, Lipschitz probes and the
//!   thinning-plan scheduler.
//! - [`exchangeable`]: the nearly-exchangeable array model and the permuted
//!   limit checks built on it.
//!
//! Every stochastic routine takes an explicit 64-bit seed and derives one
//! independent stream per sample index (see [`seed`]), so results do not
//! depend on the rayon worker count.

pub mod error;
pub mod exchangeable;
pub mod framework;
pub mod lacunary;
pub mod measures;
pub mod metrics;
pub mod seed;
pub mod sequences;

pub use error::{Error, Result};

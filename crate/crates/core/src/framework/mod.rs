//! Regular weak limit theorems `f_k(x_1, x_2, ..., mu) -> G_mu` and the
//! machinery used to transfer them to permuted, nearly exchangeable inputs.
//!
//! A theorem is regular when `f_k` reads only the window `x_{p_k}..x_{q_k}`
//! and is Lipschitz in the inputs with constant `1 / omega_k` (for the
//! `alpha`-th power of the coordinate differences).

mod checks;
mod plan;

pub use checks::{
    limit_convergence_check, lipschitz_probe, lipschitz_ratio, mc_tolerance, simulate_fk, statement_a_check,
    ConvergenceRow, StatementA,
};
pub use plan::{plan_thinning, ThinningPlan};

use num_integer::Roots;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measures::{DiscreteMeasure, MixedNormal};

pub trait RegularLimitTheorem: Sync {
    fn name(&self) -> &'static str;

    /// Exponent in the Lipschitz condition, in (0, 1].
    fn alpha(&self) -> f64;

    /// 1-based inclusive window `(p_k, q_k)`.
    fn window(&self, k: usize) -> (usize, usize);

    /// `omega_k >= 1`.
    fn modulus(&self, k: usize) -> f64;

    /// `floor(omega_k^(1/r))`, computed exactly.
    fn modulus_root_floor(&self, k: usize, r: u32) -> u64;

    /// `f_k` evaluated on the window values `x_{p_k}..x_{q_k}`.
    fn evaluate(&self, k: usize, window: &[f64], mu: &DiscreteMeasure) -> f64;

    /// Membership of `mu` in the domain `S` of the theorem.
    fn in_domain(&self, mu: &DiscreteMeasure) -> bool;

    /// The limit law `G_mu`.
    fn limit(&self, mu: &DiscreteMeasure) -> Result<MixedNormal>;
}

/// Centred, `sqrt k`-normalised partial sums. The plain form sums
/// `x_1..x_k`; the trimmed form drops the first `floor(k^(1/4)) - 1` terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clt {
    Plain,
    Trimmed,
}

pub fn make_clt() -> Clt {
    Clt::Plain
}

pub fn make_trimmed_clt() -> Clt {
    Clt::Trimmed
}

impl RegularLimitTheorem for Clt {
    fn name(&self) -> &'static str {
        match self {
            Clt::Plain => "clt",
            Clt::Trimmed => "trimmed-clt",
        }
    }

    fn alpha(&self) -> f64 {
        1.0
    }

    fn window(&self, k: usize) -> (usize, usize) {
        match self {
            Clt::Plain => (1, k),
            Clt::Trimmed => (k.nth_root(4).max(1), k),
        }
    }

    fn modulus(&self, k: usize) -> f64 {
        (k as f64).sqrt()
    }

    fn modulus_root_floor(&self, k: usize, r: u32) -> u64 {
        (k as u64).nth_root(2 * r)
    }

    /// `(sum of the window - k E mu) / sqrt k`, accumulated as
    /// `sum (x_i - E mu) - (p_k - 1) E mu` so that inputs equal to the mean
    /// cancel exactly.
    fn evaluate(&self, k: usize, window: &[f64], mu: &DiscreteMeasure) -> f64 {
        let mean = mu.mean();
        let (p, _) = self.window(k);
        let centred: f64 = window.iter().map(|x| x - mean).sum();
        let dropped = (p - 1) as f64 * mean;
        (centred - dropped) / (k as f64).sqrt()
    }

    fn in_domain(&self, _mu: &DiscreteMeasure) -> bool {
        // Finite atomic laws always have a second moment.
        true
    }

    fn limit(&self, mu: &DiscreteMeasure) -> Result<MixedNormal> {
        MixedNormal::normal(mu.mean_var().1)
    }
}

impl FromStr for Clt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clt" => Ok(Clt::Plain),
            "trimmed-clt" => Ok(Clt::Trimmed),
            _ => Err(Error::Parse(format!("unknown theorem `{s}`"))),
        }
    }
}

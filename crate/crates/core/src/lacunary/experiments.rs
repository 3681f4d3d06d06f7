use num_bigint::BigUint;
use rayon::prelude::*;
use std::str::FromStr;

use super::fixed::{auto_precision, FixedPointX};
use super::trig::{sin_turns, FourierFunction, Frequencies};
use crate::error::{Error, Result};
use crate::measures::{EmpiricalSample, Provenance};
use crate::seed;
use crate::sequences::{IndexSequence, Permutation};

/// Scaling applied to the partial sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Divide by `sqrt(N / 2)`: unit variance for `sin` with distinct frequencies.
    SqrtNOver2,
    /// Divide by `sqrt(N)`.
    SqrtN,
}

impl Normalization {
    fn scale(self, n: usize) -> f64 {
        match self {
            Normalization::SqrtNOver2 => 1.0 / (n as f64 / 2.0).sqrt(),
            Normalization::SqrtN => 1.0 / (n as f64).sqrt(),
        }
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrtN_over_2" => Ok(Normalization::SqrtNOver2),
            "sqrtN" => Ok(Normalization::SqrtN),
            _ => Err(Error::Parse(format!("unknown normalization `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Summand {
    Sine,
    Fourier(FourierFunction),
}

/// Parameters of [`clt_sample`].
#[derive(Debug, Clone, PartialEq)]
pub struct CltConfig {
    /// Number of summed terms `N`.
    pub n: usize,
    /// Number of Monte Carlo points `M`.
    pub m: usize,
    pub norm: Normalization,
    /// Sum over `n_{sigma(1)}, ..., n_{sigma(N)}` instead of the first `N`
    /// terms.
    pub perm: Option<Permutation>,
    pub summand: Summand,
    /// Fractional bits of `x`; `None` picks [`auto_precision`] of the largest
    /// summed frequency.
    pub precision: Option<u32>,
    pub seed: u64,
}

impl CltConfig {
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        CltConfig { n, m, norm: Normalization::SqrtNOver2, perm: None, summand: Summand::Sine, precision: None, seed }
    }
}

fn summed_terms(seq: &IndexSequence, n: usize, perm: Option<&Permutation>) -> Result<Vec<BigUint>> {
    match perm {
        None => Ok(seq.prefix(n)?.to_vec()),
        Some(p) => p.apply(seq.values(), n),
    }
}

/// `M` values of the normalised sum `c_N sum_k f(n_k x)` at independent
/// uniform `x`. Point `i` is drawn from the stream derived from
/// `(seed, i)`, so the output does not depend on the thread count, and
/// frequencies are summed in ascending order, so any permutation with the
/// same summed index set gives bit-identical values.
pub fn clt_sample(seq: &IndexSequence, cfg: &CltConfig) -> Result<EmpiricalSample> {
    if cfg.n == 0 || cfg.m == 0 {
        return Err(Error::BadParameter("N and M must be >= 1".into()));
    }
    let values = summed_terms(seq, cfg.n, cfg.perm.as_ref())?;
    let largest = values.iter().max().expect("n >= 1");
    let bits = cfg.precision.unwrap_or_else(|| auto_precision(largest));
    let freqs = Frequencies::new(&values, bits)?;
    let scale = cfg.norm.scale(cfg.n);
    let out = (0..cfg.m as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::task_rng(cfg.seed, i);
            let x = FixedPointX::random(&mut rng, bits)?;
            let sum = match &cfg.summand {
                Summand::Sine => freqs.sum_with(&x, sin_turns)?,
                Summand::Fourier(f) => freqs.sum_with(&x, |t| f.eval_turns(t))?,
            };
            Ok(sum * scale)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(EmpiricalSample::new(out, Provenance::new("clt", cfg.seed)))
}

/// Running values `L_N = S_N / sqrt(N log log N)`, `N = 3..=N_max`, of
/// `S_N = sum_{k <= N} sin(2 pi n_k x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LilTrajectory {
    pub points: Vec<(usize, f64)>,
    pub max: f64,
}

pub fn lil_trajectory(seq: &IndexSequence, x: &FixedPointX, n_max: usize) -> Result<LilTrajectory> {
    if n_max < 3 {
        return Err(Error::BadParameter(format!("N_max must be >= 3, got {n_max}")));
    }
    let freqs = Frequencies::new(seq.prefix(n_max)?, x.precision())?;
    let mut points = Vec::with_capacity(n_max - 2);
    let mut sum = 0.0;
    for (k, t) in freqs.turns(x)?.enumerate() {
        sum += sin_turns(t);
        let n = k + 1;
        if n >= 3 {
            let nf = n as f64;
            points.push((n, sum / (nf * nf.ln().ln()).sqrt()));
        }
    }
    let max = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(LilTrajectory { points, max })
}

/// `max_N L_N` at `count` independent uniform points.
pub fn lil_max_sample(
    seq: &IndexSequence,
    n_max: usize,
    count: usize,
    precision: Option<u32>,
    seed: u64,
) -> Result<EmpiricalSample> {
    let prefix = seq.prefix(n_max)?;
    let bits = match (precision, prefix.last()) {
        (Some(b), _) => b,
        (None, Some(last)) => auto_precision(last),
        (None, None) => return Err(Error::BadParameter("N_max must be >= 3".into())),
    };
    let out = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::task_rng(seed, i);
            let x = FixedPointX::random(&mut rng, bits)?;
            Ok(lil_trajectory(seq, &x, n_max)?.max)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(EmpiricalSample::new(out, Provenance::new("lil", seed)))
}

//! Integer index sequences `(n_k)`: generation under gap conditions,
//! Diophantine solution counts, and the permutations applied to them.

mod diophantine;
mod gaps;
mod permutation;

pub use diophantine::{count_diophantine, diophantine_growth_scan, GrowthRow};
pub use gaps::{check_erdos, check_hadamard, gap_report, gen_erdos, gen_hadamard, GapReport};
pub use permutation::{apply_permutation, PermSpec, Permutation};

use num_bigint::BigUint;
use num_traits::One;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Strictly increasing positive integers `n_1 < n_2 < ...` of arbitrary size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSequence {
    values: Vec<BigUint>,
}

impl IndexSequence {
    pub fn new(values: Vec<BigUint>) -> Result<Self> {
        if values.first().is_some_and(|v| *v < BigUint::one()) {
            return Err(Error::BadParameter("sequence terms must be >= 1".into()));
        }
        if let Some(k) = values.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::BadParameter(format!("sequence not strictly increasing at term {}", k + 2)));
        }
        Ok(IndexSequence { values })
    }

    pub fn from_u64s(values: &[u64]) -> Result<Self> {
        IndexSequence::new(values.iter().map(|&v| BigUint::from(v)).collect())
    }

    /// `1, 2, 4, ..., 2^(n-1)` scaled by `first`.
    pub fn doubling(first: u64, n: usize) -> Self {
        let first = BigUint::from(first.max(1));
        IndexSequence { values: (0..n).map(|k| &first << k).collect() }
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn prefix(&self, n: usize) -> Result<&[BigUint]> {
        self.values
            .get(..n)
            .ok_or_else(|| Error::BadParameter(format!("requested {n} terms of a sequence of length {}", self.len())))
    }

    /// One base-10 integer per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for v in &self.values {
            writeln!(out, "{v}").expect("write to String");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let values = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .enumerate()
            .map(|(i, l)| {
                l.parse::<BigUint>().map_err(|e| Error::Parse(format!("term {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        IndexSequence::new(values)
    }
}

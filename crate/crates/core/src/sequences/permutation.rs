use num_bigint::BigUint;
use rand::Rng;
use std::str::FromStr;

use super::IndexSequence;
use crate::error::{Error, Result};
use crate::seed;

/// A bijection of `{1, ..., N}` stored as its image `(sigma(1), ..., sigma(N))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &v in &image {
            if v == 0 || v > image.len() || std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::PermSize(format!("image is not a bijection of 1..={}", image.len())));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (1..=n).collect() }
    }

    pub fn reverse(n: usize) -> Self {
        Permutation { image: (1..=n).rev().collect() }
    }

    /// Splits `1..=n` into consecutive blocks of length `block` and lists the
    /// first entry of every block, then every second entry, and so on:
    /// `(4, 2) -> (1, 3, 2, 4)`.
    pub fn block_interleave(n: usize, block: usize) -> Result<Self> {
        if block == 0 || !n.is_multiple_of(block) {
            return Err(Error::BadBlock { n, block });
        }
        let blocks = n / block;
        let image = (0..block).flat_map(|r| (0..blocks).map(move |b| b * block + r + 1)).collect();
        Ok(Permutation { image })
    }

    /// Fisher–Yates shuffle of the identity, swapping position `i` with a
    /// uniform position in `0..=i` for `i` descending from `n - 1` to 1.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = seed::rng(seed);
        let mut image: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            image.swap(i, j);
        }
        Permutation { image }
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// `(x_{sigma(1)}, ..., x_{sigma(n)})` for a slice at least as long as
    /// every referenced index.
    pub fn apply<T: Clone>(&self, items: &[T], n: usize) -> Result<Vec<T>> {
        if n > self.len() {
            return Err(Error::PermSize(format!("need {n} terms, permutation has {}", self.len())));
        }
        self.image[..n]
            .iter()
            .map(|&i| {
                items.get(i - 1).cloned().ok_or_else(|| {
                    Error::PermSize(format!("permutation refers to term {i}, only {} available", items.len()))
                })
            })
            .collect()
    }
}

/// `(n_{sigma(1)}, ..., n_{sigma(N)})`; generally not increasing.
pub fn apply_permutation(seq: &IndexSequence, perm: &Permutation, n: usize) -> Result<Vec<BigUint>> {
    if n > seq.len() {
        return Err(Error::PermSize(format!("need {n} terms, sequence has {}", seq.len())));
    }
    perm.apply(seq.values(), n)
}

/// Textual permutation choice: `identity`, `reverse`, `block:k`, `random:seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermSpec {
    Identity,
    Reverse,
    Block(usize),
    Random(u64),
}

impl PermSpec {
    pub fn build(&self, n: usize) -> Result<Permutation> {
        match *self {
            PermSpec::Identity => Ok(Permutation::identity(n)),
            PermSpec::Reverse => Ok(Permutation::reverse(n)),
            PermSpec::Block(block) => Permutation::block_interleave(n, block),
            PermSpec::Random(seed) => Ok(Permutation::random(n, seed)),
        }
    }
}

impl FromStr for PermSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown permutation `{s}`"));
        match s.split_once(':') {
            None if s == "identity" => Ok(PermSpec::Identity),
            None if s == "reverse" => Ok(PermSpec::Reverse),
            Some(("block", k)) => k.parse().map(PermSpec::Block).map_err(|_| bad()),
            Some(("random", seed)) => seed.parse().map(PermSpec::Random).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for PermSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PermSpec::Identity => write!(f, "identity"),
            PermSpec::Reverse => write!(f, "reverse"),
            PermSpec::Block(k) => write!(f, "block:{k}"),
            PermSpec::Random(s) => write!(f, "random:{s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn named_permutations() {
        assert_eq!(Permutation::reverse(3).image(), &[3, 2, 1]);
        assert_eq!(Permutation::block_interleave(4, 2).unwrap().image(), &[1, 3, 2, 4]);
        assert_eq!(Permutation::block_interleave(6, 3).unwrap().image(), &[1, 4, 2, 5, 3, 6]);
        assert_eq!(Permutation::block_interleave(5, 2), Err(Error::BadBlock { n: 5, block: 2 }));
        assert_eq!(Permutation::random(5, 9), Permutation::random(5, 9));
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![2, 3]).is_err());
    }

    #[test]
    fn apply_examples() {
        let seq = IndexSequence::from_u64s(&[1, 2, 4]).unwrap();
        let id = apply_permutation(&seq, &Permutation::identity(3), 2).unwrap();
        assert_eq!(id, seq.values()[..2].to_vec());
        let rev = apply_permutation(&seq, &Permutation::reverse(3), 3).unwrap();
        assert_eq!(rev, vec![BigUint::from(4u32), BigUint::from(2u32), BigUint::from(1u32)]);
        assert!(apply_permutation(&seq, &Permutation::reverse(4), 3).is_err());
        assert!(apply_permutation(&seq, &Permutation::reverse(2), 3).is_err());
    }

    #[test]
    fn spec_parsing() {
        for s in ["identity", "reverse", "block:4", "random:3"] {
            assert_eq!(s.parse::<PermSpec>().unwrap().to_string(), s);
        }
        assert!("block:x".parse::<PermSpec>().is_err());
        assert!("shuffle".parse::<PermSpec>().is_err());
    }

    proptest! {
        #[test]
        fn permutations_preserve_the_multiset(n in 1usize..60, seed in any::<u64>(), block in 1usize..6) {
            let seq = IndexSequence::doubling(3, n);
            let mut perms = vec![Permutation::random(n, seed), Permutation::reverse(n)];
            if n % block == 0 {
                perms.push(Permutation::block_interleave(n, block).unwrap());
            }
            for p in perms {
                let mut sorted = p.image().to_vec();
                sorted.sort_unstable();
                prop_assert_eq!(sorted, (1..=n).collect::<Vec<_>>());
                let mut out = apply_permutation(&seq, &p, n).unwrap();
                out.sort();
                prop_assert_eq!(out, seq.values().to_vec());
            }
        }
    }
}

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::Zero;

use super::IndexSequence;
use crate::error::{Error, Result};

/// Number of ordered pairs `(k, l)`, `1 <= k, l <= n`, with
/// `a n_k + b n_l = c`. For each `k` the partner `n_l = (c - a n_k) / b` is
/// looked up by binary search in the sorted prefix.
pub fn count_diophantine(seq: &IndexSequence, a: i64, b: i64, c: i64, n: usize) -> Result<u64> {
    if a == 0 || b == 0 {
        return Err(Error::DegenerateCoefficient);
    }
    let prefix = seq.prefix(n)?;
    let (a, b, c) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
    let mut count = 0;
    for nk in prefix {
        let rhs = &c - &a * BigInt::from_biguint(Sign::Plus, nk.clone());
        let (partner, rem) = rhs.div_rem(&b);
        if !rem.is_zero() || partner.sign() != Sign::Plus {
            continue;
        }
        let partner: BigUint = partner.magnitude().clone();
        if prefix.binary_search(&partner).is_ok() {
            count += 1;
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    pub count: u64,
    /// `count / n`.
    pub ratio: f64,
}

/// Solution counts for each prefix length in `n_list` (which must be
/// increasing). No asymptotic classification is attempted.
pub fn diophantine_growth_scan(seq: &IndexSequence, a: i64, b: i64, c: i64, n_list: &[usize]) -> Result<Vec<GrowthRow>> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadParameter("N list must be strictly increasing".into()));
    }
    n_list
        .iter()
        .map(|&n| {
            let count = count_diophantine(seq, a, b, c, n)?;
            Ok(GrowthRow { n, count, ratio: count as f64 / n as f64 })
        })
        .collect()
}

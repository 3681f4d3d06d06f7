use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::IndexSequence;
use crate::error::{Error, Result};

/// A positive finite double as `mantissa * 2^exponent`.
fn dyadic(x: f64) -> (BigUint, i32) {
    debug_assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let exp_field = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, exponent) =
        if exp_field == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp_field - 1075) };
    (BigUint::from(mantissa), exponent)
}

/// `ceil(factor * n)`, computed exactly.
fn ceil_mul(factor: f64, n: &BigUint) -> BigUint {
    let (mantissa, exponent) = dyadic(factor);
    let product = mantissa * n;
    if exponent >= 0 {
        product << exponent as usize
    } else {
        let shift = (-exponent) as usize;
        let denom_minus_one = (BigUint::one() << shift) - 1u32;
        (product + denom_minus_one) >> shift
    }
}

/// Exact test of `next >= factor * prev`.
fn ratio_at_least(next: &BigUint, prev: &BigUint, factor: f64) -> bool {
    let (mantissa, exponent) = dyadic(factor);
    if exponent >= 0 {
        *next >= (mantissa * prev) << exponent as usize
    } else {
        (next << (-exponent) as usize) >= mantissa * prev
    }
}

fn erdos_factor(c: f64, alpha: f64, k: usize) -> f64 {
    1.0 + c * (k as f64).powf(-alpha)
}

fn grow(n1: u64, len: usize, factor: impl Fn(usize) -> f64) -> IndexSequence {
    let mut values = Vec::with_capacity(len);
    let mut current = BigUint::from(n1);
    for k in 1..=len {
        values.push(current.clone());
        let next = ceil_mul(factor(k), &current).max(&current + 1u32);
        current = next;
    }
    IndexSequence::new(values).expect("generator output is strictly increasing")
}

fn validate_start(n1: u64) -> Result<()> {
    if n1 == 0 {
        return Err(Error::BadParameter("n1 must be >= 1".into()));
    }
    Ok(())
}

/// `n_{k+1} = max(ceil(q n_k), n_k + 1)`.
pub fn gen_hadamard(q: f64, n1: u64, len: usize) -> Result<IndexSequence> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::BadQ(q));
    }
    validate_start(n1)?;
    Ok(grow(n1, len, |_| q))
}

/// `n_{k+1} = max(ceil(n_k (1 + c k^{-alpha})), n_k + 1)`.
pub fn gen_erdos(c: f64, alpha: f64, n1: u64, len: usize) -> Result<IndexSequence> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::BadParameter(format!("c must be > 0, got {c}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::BadParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    validate_start(n1)?;
    Ok(grow(n1, len, |k| erdos_factor(c, alpha, k)))
}

/// Whether `n_{k+1} / n_k >= q` for every consecutive pair.
pub fn check_hadamard(seq: &IndexSequence, q: f64) -> Result<bool> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::BadQ(q));
    }
    if seq.len() < 2 {
        return Err(Error::TooShort(seq.len()));
    }
    Ok(seq.values().windows(2).all(|w| ratio_at_least(&w[1], &w[0], q)))
}

/// Whether `n_{k+1} / n_k >= 1 + c k^{-alpha}` for every consecutive pair.
pub fn check_erdos(seq: &IndexSequence, c: f64, alpha: f64) -> Result<bool> {
    if !(c > 0.0 && c.is_finite()) || !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::BadParameter(format!("need c > 0 and alpha > 0, got ({c}, {alpha})")));
    }
    if seq.len() < 2 {
        return Err(Error::TooShort(seq.len()));
    }
    Ok(seq
        .values()
        .windows(2)
        .enumerate()
        .all(|(i, w)| ratio_at_least(&w[1], &w[0], erdos_factor(c, alpha, i + 1))))
}

/// Summary of the consecutive ratios of a sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub min_ratio: f64,
    /// `Some(min_ratio)` when every ratio exceeds one.
    pub hadamard_q: Option<f64>,
    /// `(c, alpha)` from a log-log least-squares fit of `ratio_k - 1`
    /// against `k`, with `c` lowered so that every ratio satisfies the bound.
    /// Only reported when the fitted `alpha` lies in (0, 1).
    pub erdos_fit: Option<(f64, f64)>,
}

fn ratio_f64(next: &BigUint, prev: &BigUint) -> f64 {
    let shift = next.bits().saturating_sub(62) as usize;
    let num = (next >> shift).to_f64().unwrap_or(f64::INFINITY);
    let den = (prev >> shift).to_f64().unwrap_or(f64::INFINITY);
    if den.is_zero() {
        // prev vanished under the shift: the ratio exceeds 2^62.
        f64::INFINITY
    } else {
        num / den
    }
}

pub fn gap_report(seq: &IndexSequence) -> Result<GapReport> {
    if seq.len() < 2 {
        return Err(Error::TooShort(seq.len()));
    }
    let ratios: Vec<f64> = seq.values().windows(2).map(|w| ratio_f64(&w[1], &w[0])).collect();
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hadamard_q = (min_ratio > 1.0).then_some(min_ratio);
    let points: Vec<(f64, f64)> = ratios
        .iter()
        .enumerate()
        .filter(|(_, r)| **r > 1.0 && r.is_finite())
        .map(|(i, r)| (((i + 1) as f64).ln(), (r - 1.0).ln()))
        .collect();
    let erdos_fit = if points.len() >= 2 && points.len() == ratios.len() {
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let alpha = -sxy / sxx;
        (alpha > 0.0 && alpha < 1.0).then(|| {
            let c = ratios
                .iter()
                .enumerate()
                .map(|(i, r)| (r - 1.0) * ((i + 1) as f64).powf(alpha))
                .fold(f64::INFINITY, f64::min);
            (c, alpha)
        })
    } else {
        None
    };
    Ok(GapReport { min_ratio, hadamard_q, erdos_fit })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u64s(seq: &IndexSequence) -> Vec<u64> {
        seq.values().iter().map(|v| v.to_u64().unwrap()).collect()
    }

    #[test]
    fn hadamard_examples() {
        assert_eq!(u64s(&gen_hadamard(2.0, 1, 5).unwrap()), vec![1, 2, 4, 8, 16]);
        assert_eq!(u64s(&gen_hadamard(1.5, 2, 4).unwrap()), vec![2, 3, 5, 8]);
        let slow = gen_hadamard(1.0001, 1, 50).unwrap();
        assert!(check_hadamard(&slow, 1.0 + 1e-12).unwrap());
        assert!(check_hadamard(&slow, 1.0001).unwrap());
        assert!(matches!(gen_hadamard(1.0, 1, 3), Err(Error::BadQ(_))));
    }

    #[test]
    fn erdos_examples() {
        let s = gen_erdos(1.0, 0.25, 10, 3).unwrap();
        assert_eq!(u64s(&s), vec![10, 20, 37]);
        let long = gen_erdos(0.5, 0.4, 1, 300).unwrap();
        assert!(check_erdos(&long, 0.5, 0.4).unwrap());
    }

    #[test]
    fn checker_examples() {
        let pow = IndexSequence::from_u64s(&[2, 4, 8, 16]).unwrap();
        assert!(check_hadamard(&pow, 2.0).unwrap());
        let squares = IndexSequence::from_u64s(&[1, 4, 9, 16]).unwrap();
        assert!(!check_hadamard(&squares, 2.0).unwrap());
        assert!(matches!(check_hadamard(&squares, 1.0), Err(Error::BadQ(_))));
        let one = IndexSequence::from_u64s(&[3]).unwrap();
        assert_eq!(check_hadamard(&one, 2.0), Err(Error::TooShort(1)));
    }

    #[test]
    fn exact_comparison_at_the_boundary() {
        // 3/2 is exactly 1.5: passes at q = 1.5, fails just above.
        let s = IndexSequence::from_u64s(&[2, 3]).unwrap();
        assert!(check_hadamard(&s, 1.5).unwrap());
        assert!(!check_hadamard(&s, 1.5 + f64::EPSILON).unwrap());
    }

    #[test]
    fn big_doubling_ratios() {
        let s = gen_hadamard(2.0, 1, 2000).unwrap();
        assert_eq!(s.values()[1999], BigUint::one() << 1999usize);
        let report = gap_report(&s).unwrap();
        assert_eq!(report.min_ratio, 2.0);
        assert_eq!(report.hadamard_q, Some(2.0));
    }

    #[test]
    fn erdos_fit_recovers_exponent() {
        let s = gen_erdos(1.0, 0.3, 1_000_000_000, 400).unwrap();
        let (c, alpha) = gap_report(&s).unwrap().erdos_fit.unwrap();
        assert!((alpha - 0.3).abs() < 0.05, "{alpha}");
        assert!(c > 0.5 && c <= 1.01, "{c}");
    }
}

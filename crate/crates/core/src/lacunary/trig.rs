use num_bigint::BigUint;
use num_traits::One;
use std::f64::consts::TAU;

use super::fixed::{check_frequency, mul_top64, FixedPointX};
use crate::error::{Error, Result};

const QUARTER_TURN: u64 = 1 << 62;

/// `sin(2 pi t / 2^64)`. Reduction to a quarter turn is exact, so the values
/// at multiples of a quarter turn are exactly `0, 1, 0, -1`.
pub fn sin_turns(t: u64) -> f64 {
    let r = t & (QUARTER_TURN - 1);
    let a = r as f64 * (TAU / 18_446_744_073_709_551_616.0);
    let v = match t >> 62 {
        0 => a.sin(),
        1 => a.cos(),
        2 => -a.sin(),
        _ => -a.cos(),
    };
    // Fold -0.0 so that sums of exact zeros print as 0.
    v + 0.0
}

/// `cos(2 pi t / 2^64)`.
pub fn cos_turns(t: u64) -> f64 {
    sin_turns(t.wrapping_add(QUARTER_TURN))
}

fn turns_of(t: f64) -> u64 {
    let r = t.rem_euclid(1.0);
    // r * 2^64 may round up to 2^64 for r just below 1; that is a full turn.
    let scaled = r * 18_446_744_073_709_551_616.0;
    if scaled >= 18_446_744_073_709_551_616.0 {
        0
    } else {
        scaled as u64
    }
}

/// Mean-zero 1-periodic trigonometric polynomial
/// `f(t) = sum_j a_j cos(2 pi j t) + b_j sin(2 pi j t)`, `j = 1..J`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierFunction {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl FourierFunction {
    pub fn new(cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.iter().chain(&sin).any(|c| !c.is_finite()) {
            return Err(Error::BadParameter("Fourier coefficients must be finite".into()));
        }
        Ok(FourierFunction { cos, sin })
    }

    /// `sin(2 pi t)`.
    pub fn sine() -> Self {
        FourierFunction { cos: vec![], sin: vec![1.0] }
    }

    /// `cos(2 pi t)`.
    pub fn cosine() -> Self {
        FourierFunction { cos: vec![1.0], sin: vec![] }
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    /// `int_0^1 f^2 = sum (a_j^2 + b_j^2) / 2`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.cos.iter().chain(&self.sin).map(|c| c * c).sum::<f64>() / 2.0
    }

    /// Evaluates at `t / 2^64` turns; `j t` is formed exactly mod 2^64.
    pub fn eval_turns(&self, t: u64) -> f64 {
        let mut acc = 0.0;
        for (j, a) in self.cos.iter().enumerate() {
            acc += a * cos_turns(t.wrapping_mul(j as u64 + 1));
        }
        for (j, b) in self.sin.iter().enumerate() {
            acc += b * sin_turns(t.wrapping_mul(j as u64 + 1));
        }
        acc
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_turns(turns_of(t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Frequency {
    PowerOfTwo(usize),
    General(Vec<u64>),
}

/// A set of frequencies prepared for repeated evaluation at `B`-bit points.
/// Frequencies are stored in ascending order, which fixes the summation
/// order independently of how they were supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frequencies {
    freqs: Vec<Frequency>,
    bits: u32,
}

impl Frequencies {
    pub fn new(values: &[BigUint], bits: u32) -> Result<Self> {
        if !bits.is_multiple_of(64) || bits == 0 {
            return Err(Error::BadParameter(format!("precision must be a positive multiple of 64, got {bits}")));
        }
        let mut sorted: Vec<&BigUint> = values.iter().collect();
        sorted.sort();
        let limbs = bits as usize / 64;
        let freqs = sorted
            .into_iter()
            .map(|n| {
                check_frequency(n, bits)?;
                let tz = n.trailing_zeros().unwrap_or(0);
                Ok(if (n >> tz as usize).is_one() {
                    Frequency::PowerOfTwo(tz as usize)
                } else {
                    let mut digits = (n % (BigUint::one() << bits as usize)).to_u64_digits();
                    digits.truncate(limbs);
                    Frequency::General(digits)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Frequencies { freqs, bits })
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn precision(&self) -> u32 {
        self.bits
    }

    /// Leading 64 bits of `n x mod 1` for each frequency, in ascending order.
    pub fn turns<'a>(&'a self, x: &'a FixedPointX) -> Result<impl Iterator<Item = u64> + 'a> {
        if x.precision() != self.bits {
            return Err(Error::BadParameter(format!(
                "point has {} bits, frequencies were prepared for {}",
                x.precision(),
                self.bits
            )));
        }
        let b = self.bits as usize;
        Ok(self.freqs.iter().map(move |f| match f {
            Frequency::PowerOfTwo(s) => x.window64(b - 64 - s),
            Frequency::General(limbs) => mul_top64(limbs, x.limbs()),
        }))
    }

    /// `sum_k g(n_k x mod 1)` in ascending frequency order.
    pub fn sum_with(&self, x: &FixedPointX, g: impl Fn(u64) -> f64) -> Result<f64> {
        Ok(self.turns(x)?.fold(0.0, |acc, t| acc + g(t)))
    }
}

/// `sum_k sin(2 pi n_k x)`; the order of `seq_prefix` does not matter.
pub fn trig_sum(seq_prefix: &[BigUint], x: &FixedPointX) -> Result<f64> {
    Frequencies::new(seq_prefix, x.precision())?.sum_with(x, sin_turns)
}

/// `sum_k f(n_k x)`.
pub fn f_sum(f: &FourierFunction, seq_prefix: &[BigUint], x: &FixedPointX) -> Result<f64> {
    Frequencies::new(seq_prefix, x.precision())?.sum_with(x, |t| f.eval_turns(t))
}

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Default number of fractional bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: &BigUint) -> u64 {
    if n.is_zero() || n.is_one() {
        0
    } else {
        (n - 1u32).bits()
    }
}

/// Smallest multiple of 64 that is at least 256 and leaves 64 guard bits
/// above `ceil(log2 n_max)`.
pub fn auto_precision(n_max: &BigUint) -> u32 {
    let needed = ceil_log2(n_max) + 65;
    let rounded = needed.div_ceil(64) * 64;
    (rounded as u32).max(DEFAULT_PRECISION)
}

/// `x` in `[0, 1)` as `x_int / 2^B`; limbs little-endian, `B = 64 * limbs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FixedPointX {
    limbs: Vec<u64>,
}

fn check_precision(bits: u32) -> Result<usize> {
    if bits == 0 || !bits.is_multiple_of(64) {
        return Err(Error::BadParameter(format!("precision must be a positive multiple of 64, got {bits}")));
    }
    Ok(bits as usize / 64)
}

impl FixedPointX {
    pub fn zero(bits: u32) -> Result<Self> {
        Ok(FixedPointX { limbs: vec![0; check_precision(bits)?] })
    }

    /// Exact conversion of a double in `[0, 1)`; needs `bits >= 1075` only
    /// for subnormal-scale inputs, otherwise low bits are truncated.
    pub fn from_f64(x: f64, bits: u32) -> Result<Self> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::BadParameter(format!("x = {x} is outside [0, 1)")));
        }
        let limbs = check_precision(bits)?;
        if x == 0.0 {
            return FixedPointX::zero(bits);
        }
        let raw = x.to_bits();
        let exp_field = ((raw >> 52) & 0x7ff) as i64;
        let frac = raw & ((1u64 << 52) - 1);
        let (mantissa, exponent) =
            if exp_field == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp_field - 1075) };
        // x * 2^B = mantissa * 2^(exponent + B)
        let shift = exponent + i64::from(bits);
        let value = if shift >= 0 {
            BigUint::from(mantissa) << shift as usize
        } else {
            BigUint::from(mantissa) >> (-shift) as usize
        };
        Ok(FixedPointX::from_biguint(value, limbs))
    }

    /// `floor(p 2^B / q)`, the B-bit truncation of `p / q` (requires `p < q`).
    pub fn from_rational(p: &BigUint, q: &BigUint, bits: u32) -> Result<Self> {
        if q.is_zero() || p >= q {
            return Err(Error::BadParameter("rational must lie in [0, 1)".into()));
        }
        let limbs = check_precision(bits)?;
        Ok(FixedPointX::from_biguint((p << bits as usize) / q, limbs))
    }

    /// Uniform on the `2^B` grid points, most significant limb drawn first.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, bits: u32) -> Result<Self> {
        let n = check_precision(bits)?;
        let mut limbs = vec![0u64; n];
        for limb in limbs.iter_mut().rev() {
            *limb = rng.gen();
        }
        Ok(FixedPointX { limbs })
    }

    fn from_biguint(value: BigUint, limbs: usize) -> Self {
        let mut digits = value.to_u64_digits();
        digits.resize(limbs, 0);
        FixedPointX { limbs: digits }
    }

    pub fn precision(&self) -> u32 {
        (self.limbs.len() * 64) as u32
    }

    /// The integer `x 2^B`.
    pub fn numerator(&self) -> BigUint {
        BigUint::from_slice(
            &self.limbs.iter().flat_map(|&l| [l as u32, (l >> 32) as u32]).collect::<Vec<_>>(),
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.top64() as f64 * 2f64.powi(-64)
    }

    /// The leading 64 fractional bits, i.e. `floor(x 2^64)`.
    pub fn top64(&self) -> u64 {
        *self.limbs.last().expect("precision is at least 64 bits")
    }

    pub(crate) fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    /// Bits `[offset, offset + 64)` of `x_int`; bits above `B` read as zero.
    pub(crate) fn window64(&self, offset: usize) -> u64 {
        let (i, sh) = (offset / 64, offset % 64);
        let lo = self.limbs.get(i).copied().unwrap_or(0);
        if sh == 0 {
            lo
        } else {
            let hi = self.limbs.get(i + 1).copied().unwrap_or(0);
            (lo >> sh) | (hi << (64 - sh))
        }
    }
}

pub(crate) fn check_frequency(n: &BigUint, bits: u32) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::BadParameter("frequency must be >= 1".into()));
    }
    let needed = ceil_log2(n);
    if needed + 64 >= u64::from(bits) {
        return Err(Error::PrecisionExhausted { needed, bits });
    }
    Ok(needed)
}

/// Top 64 bits of `(n_limbs * x_int) mod 2^B`.
pub(crate) fn mul_top64(n_limbs: &[u64], x: &[u64]) -> u64 {
    let len = x.len();
    // Only the product limbs below `len` matter; accumulate column-wise.
    let mut acc = vec![0u64; len];
    for (i, &a) in n_limbs.iter().enumerate().take(len) {
        let mut carry: u128 = 0;
        for j in 0..len - i {
            let cur = acc[i + j] as u128 + (a as u128) * (x[j] as u128) + carry;
            acc[i + j] = cur as u64;
            carry = cur >> 64;
        }
    }
    acc[len - 1]
}

/// Fractional part of `n x`, exact for the stored `B`-bit `x`. Relative to
/// the real number `x` approximated by the stored value (error `< 2^-B`)
/// the result is within `2^-(B - ceil(log2 n))`.
pub fn frac_mul(x: &FixedPointX, n: &BigUint) -> Result<FixedPointX> {
    check_frequency(n, x.precision())?;
    let bits = x.precision() as usize;
    let modulus_mask = (BigUint::one() << bits) - 1u32;
    let product = (n * x.numerator()) & modulus_mask;
    Ok(FixedPointX::from_biguint(product, x.limbs.len()))
}

impl FixedPointX {
    /// Distance from `x` to `p / q` on the circle `R / Z`.
    pub fn circle_distance_to(&self, p: &BigUint, q: &BigUint) -> f64 {
        let bits = self.precision() as usize;
        let full = q << bits;
        let scaled_x = self.numerator() * q;
        let scaled_p = (p % q) << bits;
        let diff = if scaled_x >= scaled_p { &scaled_x - &scaled_p } else { &scaled_p - &scaled_x };
        let diff = (&full - &diff).min(diff);
        let shift = full.bits().saturating_sub(64) as usize;
        let num = (diff >> shift).to_f64().unwrap_or(f64::INFINITY);
        let den = (full >> shift).to_f64().unwrap_or(f64::INFINITY);
        num / den
    }
}

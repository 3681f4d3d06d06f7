use super::RegularLimitTheorem;
use crate::error::{Error, Result};

/// Thinning schedule: block indices `r_k` for `k = start_k..=end_k` and
/// accuracy levels `eps_m` for `m = 1..=r_{end_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinningPlan {
    alpha: f64,
    start_k: usize,
    r: Vec<usize>,
    eps: Vec<f64>,
}

impl ThinningPlan {
    pub fn start_k(&self) -> usize {
        self.start_k
    }

    pub fn end_k(&self) -> usize {
        self.start_k + self.r.len() - 1
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn r_k(&self, k: usize) -> Option<usize> {
        k.checked_sub(self.start_k).and_then(|i| self.r.get(i)).copied()
    }

    pub fn eps_m(&self, m: usize) -> Option<f64> {
        m.checked_sub(1).and_then(|i| self.eps.get(i)).copied()
    }

    /// `eps_{r_k}`.
    pub fn eps_at(&self, k: usize) -> Option<f64> {
        self.r_k(k).and_then(|m| self.eps_m(m))
    }

    /// `(k, r_k)` pairs.
    pub fn r_table(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.r.iter().enumerate().map(|(i, &r)| (self.start_k + i, r))
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    /// Re-checks every defining inequality; returns the first failing `k`.
    pub fn verify<T, F>(&self, t: &T, tail_bound: F) -> Result<()>
    where
        T: RegularLimitTheorem + ?Sized,
        F: Fn(f64) -> f64,
    {
        let monotone_r = self.r.windows(2).all(|w| w[0] <= w[1]);
        let monotone_eps = self.eps.windows(2).all(|w| w[0] >= w[1]) && self.eps.iter().all(|&e| e > 0.0);
        for (k, r) in self.r_table() {
            let (p, q) = t.window(k);
            let structural = r >= 1 && r < p && r as u64 <= t.modulus_root_floor(k, 4);
            let tail = tail_condition(tail_bound(tail_threshold(t, k)), r);
            let eps = self.eps_m(r).is_some_and(|e| level_condition(e, self.alpha, k, q));
            if !(structural && tail && eps && monotone_r && monotone_eps) {
                return Err(Error::PlanInfeasible { k });
            }
        }
        Ok(())
    }
}

fn tail_threshold<T: RegularLimitTheorem + ?Sized>(t: &T, k: usize) -> f64 {
    t.modulus(k).powf(1.0 / (4.0 * t.alpha())) / 2.0
}

/// `tail <= r^-2 / 2`.
fn tail_condition(tail: f64, r: usize) -> bool {
    let r = r as f64;
    2.0 * tail * r * r <= 1.0
}

/// Largest `r` (capped at `usize::MAX`) with `tail <= r^-2 / 2`.
fn tail_cap(tail: f64) -> usize {
    if tail <= 0.0 {
        return usize::MAX;
    }
    let mut r = (1.0 / (2.0 * tail).sqrt()).floor() as usize;
    while r > 0 && !tail_condition(tail, r) {
        r -= 1;
    }
    while tail_condition(tail, r + 1) {
        r += 1;
    }
    r
}

/// `eps^alpha q k <= 1`; exact for `alpha = 1`.
fn level_condition(eps: f64, alpha: f64, k: usize, q: usize) -> bool {
    if !(eps > 0.0) {
        return false;
    }
    if alpha != 1.0 {
        return eps.powf(alpha) * q as f64 * k as f64 <= 1.0;
    }
    let bits = eps.to_bits();
    let exp_field = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, exponent) =
        if exp_field == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp_field - 1075) };
    // mantissa * q * k * 2^exponent <= 1
    let product = mantissa as u128 * q as u128 * k as u128;
    if exponent >= 0 {
        return product.checked_shl(exponent as u32).is_some_and(|v| v <= 1) && product <= 1;
    }
    let shift = (-exponent) as u32;
    shift >= 128 || product <= 1u128 << shift
}

/// The maximal schedule for `k <= k_max`:
///
/// - `r_k` is the largest nondecreasing sequence with
///   `r_k <= min(p_k - 1, floor(omega_k^(1/4)))` and
///   `tail_bound(omega_k^(1/(4 alpha)) / 2) <= r_k^-2 / 2`;
/// - `eps_m` is the largest nonincreasing sequence in `(0, 1]` with
///   `eps_{r_k}^alpha q_k <= 1 / k`.
///
/// Indices `k` with `p_k = 1` admit no `r_k >= 1`; the schedule starts at the
/// first `k` with `p_k >= 2`. `tail_bound(t)` must bound `sup_j P(|X_j| >= t)`.
pub fn plan_thinning<T, F>(t: &T, tail_bound: F, k_max: usize) -> Result<ThinningPlan>
where
    T: RegularLimitTheorem + ?Sized,
    F: Fn(f64) -> f64,
{
    if k_max == 0 {
        return Err(Error::BadParameter("K must be >= 1".into()));
    }
    let start_k = (1..=k_max).find(|&k| t.window(k).0 >= 2).ok_or(Error::PlanInfeasible { k: 1 })?;
    let mut caps = Vec::with_capacity(k_max - start_k + 1);
    for k in start_k..=k_max {
        let (p, _) = t.window(k);
        let tail = tail_bound(tail_threshold(t, k));
        if !(0.0..=1.0).contains(&tail) {
            return Err(Error::BadParameter(format!("tail bound {tail} at k = {k} is not a probability")));
        }
        let structural = (p - 1).min(usize::try_from(t.modulus_root_floor(k, 4)).unwrap_or(usize::MAX));
        let cap = structural.min(tail_cap(tail));
        if cap == 0 {
            return Err(Error::PlanInfeasible { k });
        }
        caps.push(cap);
    }
    let mut r = caps;
    for i in (0..r.len().saturating_sub(1)).rev() {
        r[i] = r[i].min(r[i + 1]);
    }

    let alpha = t.alpha();
    let m_max = *r.last().expect("nonempty");
    let mut bound = vec![1.0f64; m_max];
    for (i, &m) in r.iter().enumerate() {
        let k = start_k + i;
        let q = t.window(k).1;
        let mut level = (1.0 / (k as f64 * q as f64)).powf(1.0 / alpha).min(bound[m - 1]);
        while !level_condition(level, alpha, k, q) {
            level = level.next_down();
        }
        bound[m - 1] = level;
    }
    for m in 1..m_max {
        bound[m] = bound[m].min(bound[m - 1]);
    }
    let plan = ThinningPlan { alpha, start_k, r, eps: bound };
    plan.verify(t, tail_bound)?;
    Ok(plan)
}

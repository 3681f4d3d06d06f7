use crate::measures::{DiscreteMeasure, compensated_sum};

/// Quadratic Wasserstein distance via the quantile coupling,
/// `(int_0^1 |F^{-1}(u) - G^{-1}(u)|^2 du)^{1/2}`, integrated exactly over
/// the merged breakpoints of the two distribution functions.
pub fn wasserstein2(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
    let (xs, fx) = (mu.positions(), mu.cumulative());
    let (ys, fy) = (nu.positions(), nu.cumulative());
    let (mut i, mut j) = (0, 0);
    let mut prev = 0.0;
    let mut pieces = Vec::with_capacity(xs.len() + ys.len());
    while i < xs.len() && j < ys.len() {
        let next = fx[i].min(fy[j]);
        let diff = xs[i] - ys[j];
        pieces.push((next - prev) * diff * diff);
        prev = next;
        let (step_i, step_j) = (fx[i] <= next, fy[j] <= next);
        i += step_i as usize;
        j += step_j as usize;
    }
    compensated_sum(pieces).max(0.0).sqrt()
}

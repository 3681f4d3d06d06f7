//! Exact Prohorov distance between finite atomic measures.
//!
//! For closed distance thresholds, Strassen's theorem turns the definition
//! into a transport question:
//!
//! ```text
//! rho(mu, nu) = inf { d >= 0 : deficit(d) <= d },
//! deficit(d)  = 1 - max { pi(|X - Y| <= d) : pi a coupling of mu and nu }.
//! ```
//!
//! The open-ball definition gives the same infimum. `deficit` is a
//! nonincreasing right-continuous step function that only moves at pairwise
//! distances, so the infimum is attained either at a pairwise distance or at
//! a deficit value; both are doubles. The predicate `deficit(d) <= d` is
//! monotone in `d`, hence bisection over the ordered bit patterns of
//! nonnegative doubles in `[0, 1]` finds the exact smallest double satisfying
//! it in at most 64 max-flow evaluations, which is the minimum over the
//! candidate set `{0} ∪ {|x_i - y_j|}` of `max(d, deficit(d))`.

use super::flow::{interval_flow, scale_masses, within, MASS_SCALE};
use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;

/// Largest combined support handled by [`prohorov_oracle`].
pub const ORACLE_MAX_ATOMS: usize = 14;

struct Scaled<'a> {
    xs: &'a [f64],
    a: Vec<u64>,
    ys: &'a [f64],
    b: Vec<u64>,
    total: u64,
}

impl<'a> Scaled<'a> {
    fn new(mu: &'a DiscreteMeasure, nu: &'a DiscreteMeasure) -> Self {
        let a = scale_masses(mu.masses());
        let b = scale_masses(nu.masses());
        let total = a.iter().sum::<u64>().max(b.iter().sum::<u64>());
        Scaled { xs: mu.positions(), a, ys: nu.positions(), b, total }
    }

    fn deficit(&self, d: f64) -> f64 {
        let flow = interval_flow(self.xs, &self.a, self.ys, &self.b, d, false).value;
        ((self.total - flow) as f64 / MASS_SCALE).min(1.0)
    }
}

/// Mass that cannot be moved by a coupling using only pairs at distance
/// at most `d`.
pub fn deficit(mu: &DiscreteMeasure, nu: &DiscreteMeasure, d: f64) -> f64 {
    Scaled::new(mu, nu).deficit(d)
}

/// Exact Prohorov distance. Symmetric bit-for-bit and never above 1.
pub fn prohorov_distance(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
    let scaled = Scaled::new(mu, nu);
    let holds = |d: f64| scaled.deficit(d) <= d;
    if holds(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64.to_bits(), 1.0f64.to_bits());
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(f64::from_bits(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    f64::from_bits(hi)
}

/// Brute-force Prohorov distance straight from the set definition, with
/// closed neighbourhoods: every subset `A` of the joint support is tested
/// against `mu(A) <= nu(A^eps) + eps` and the symmetric inequality, and the
/// smallest valid `eps` is located by bisection to 1e-12.
pub fn prohorov_oracle(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<f64> {
    let mut support: Vec<f64> = mu.positions().iter().chain(nu.positions()).copied().collect();
    support.sort_by(|a, b| a.total_cmp(b));
    support.dedup_by(|a, b| a.to_bits() == b.to_bits());
    let u = support.len();
    if u > ORACLE_MAX_ATOMS {
        return Err(Error::OracleSize(u, ORACLE_MAX_ATOMS));
    }
    let weights = |m: &DiscreteMeasure| -> Vec<f64> {
        support
            .iter()
            .map(|s| m.atoms().find(|(p, _)| p.to_bits() == s.to_bits()).map_or(0.0, |a| a.1))
            .collect()
    };
    let (wm, wn) = (weights(mu), weights(nu));
    let subsets = 1usize << u;
    let mut mass_mu = vec![0.0; subsets];
    let mut mass_nu = vec![0.0; subsets];
    for set in 1..subsets {
        let low = set.trailing_zeros() as usize;
        let rest = set & (set - 1);
        mass_mu[set] = mass_mu[rest] + wm[low];
        mass_nu[set] = mass_nu[rest] + wn[low];
    }
    let mut hull = vec![0usize; subsets];
    let mut valid = |eps: f64| -> bool {
        let ball: Vec<usize> = support
            .iter()
            .map(|&c| {
                support.iter().enumerate().filter(|(_, &o)| within(c, o, eps)).fold(0, |acc, (k, _)| acc | (1 << k))
            })
            .collect();
        for set in 1..subsets {
            let low = set.trailing_zeros() as usize;
            hull[set] = hull[set & (set - 1)] | ball[low];
            let nb = hull[set];
            if mass_mu[set] > mass_nu[nb] + eps || mass_nu[set] > mass_mu[nb] + eps {
                return false;
            }
        }
        true
    };
    if valid(0.0) {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if valid(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// A joint law of two atomic measures.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    pub rows: Vec<f64>,
    pub cols: Vec<f64>,
    /// `mass[i][j]` is the probability of `(rows[i], cols[j])`.
    pub mass: Vec<Vec<f64>>,
}

impl Coupling {
    /// `sum { pi[i][j] : |x_i - y_j| > eps }`.
    pub fn violation(&self, eps: f64) -> f64 {
        let mut total = 0.0;
        for (i, &x) in self.rows.iter().enumerate() {
            for (j, &y) in self.cols.iter().enumerate() {
                if !within(x, y, eps) {
                    total += self.mass[i][j];
                }
            }
        }
        total
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.mass.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.cols.len()).map(|j| self.mass.iter().map(|r| r[j]).sum()).collect()
    }

    /// Largest absolute deviation of either marginal from the given measures.
    pub fn marginal_error(&self, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
        let rows = self.row_sums().into_iter().zip(mu.masses()).map(|(r, m)| (r - m).abs());
        let cols = self.col_sums().into_iter().zip(nu.masses()).map(|(c, m)| (c - m).abs());
        rows.chain(cols).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CouplingOutcome {
    Feasible(Coupling),
    /// No coupling keeps the far mass within `eps`; carries `deficit(eps)`.
    Infeasible { deficit: f64 },
}

impl CouplingOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, CouplingOutcome::Feasible(_))
    }
}

/// Coupling with `pi(|X - Y| > eps) <= eps` carrying the maximal in-range
/// mass, or `Infeasible` when no such coupling exists.
pub fn strassen_coupling(mu: &DiscreteMeasure, nu: &DiscreteMeasure, eps: f64) -> Result<CouplingOutcome> {
    if !(eps >= 0.0) {
        return Err(Error::BadParameter(format!("eps must be >= 0, got {eps}")));
    }
    let scaled = Scaled::new(mu, nu);
    let gap = scaled.deficit(eps);
    if gap > eps {
        return Ok(CouplingOutcome::Infeasible { deficit: gap });
    }
    let flow = interval_flow(scaled.xs, &scaled.a, scaled.ys, &scaled.b, eps, true);
    let (n, m) = (mu.len(), nu.len());
    let mut mass = vec![vec![0.0; m]; n];
    for &(i, j, f) in &flow.edges {
        mass[i][j] = f as f64 / MASS_SCALE;
    }
    // Integer rounding can overshoot a marginal by < 1e-12 per atom; trim the
    // excess from the largest cell before spreading the residual mass.
    for (i, &target) in mu.masses().iter().enumerate() {
        let excess = mass[i].iter().sum::<f64>() - target;
        if excess > 0.0 {
            let j = argmax(&mass[i]);
            mass[i][j] = (mass[i][j] - excess).max(0.0);
        }
    }
    for (j, &target) in nu.masses().iter().enumerate() {
        let excess = mass.iter().map(|r| r[j]).sum::<f64>() - target;
        if excess > 0.0 {
            let column: Vec<f64> = mass.iter().map(|r| r[j]).collect();
            let i = argmax(&column);
            mass[i][j] = (mass[i][j] - excess).max(0.0);
        }
    }
    let mut row_left: Vec<f64> =
        mu.masses().iter().zip(&mass).map(|(&t, r)| (t - r.iter().sum::<f64>()).max(0.0)).collect();
    let mut col_left: Vec<f64> = nu
        .masses()
        .iter()
        .enumerate()
        .map(|(j, &t)| (t - mass.iter().map(|r| r[j]).sum::<f64>()).max(0.0))
        .collect();
    // North-west corner assignment of what the flow could not place.
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        let t = row_left[i].min(col_left[j]);
        mass[i][j] += t;
        row_left[i] -= t;
        col_left[j] -= t;
        if row_left[i] <= col_left[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    Ok(CouplingOutcome::Feasible(Coupling {
        rows: mu.positions().to_vec(),
        cols: nu.positions().to_vec(),
        mass,
    }))
}

fn argmax(values: &[f64]) -> usize {
    values.iter().enumerate().fold(0, |best, (k, &v)| if v > values[best] { k } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point() -> DiscreteMeasure {
        DiscreteMeasure::new(vec![(0.0, 0.5), (1.0, 0.5)]).unwrap()
    }

    #[test]
    fn distance_examples() {
        let r = DiscreteMeasure::rademacher();
        assert_eq!(prohorov_distance(&r, &r), 0.0);
        assert_eq!(prohorov_distance(&DiscreteMeasure::dirac(0.0), &DiscreteMeasure::dirac(0.3)), 0.3);
        assert_eq!(prohorov_distance(&DiscreteMeasure::dirac(0.0), &DiscreteMeasure::dirac(5.0)), 1.0);
        assert_eq!(prohorov_distance(&two_point(), &DiscreteMeasure::dirac(0.0)), 0.5);
    }

    #[test]
    fn oracle_examples() {
        let z = DiscreteMeasure::dirac(0.0);
        assert_eq!(prohorov_oracle(&z, &z).unwrap(), 0.0);
        let v = prohorov_oracle(&z, &DiscreteMeasure::dirac(0.3)).unwrap();
        assert!((v - 0.3).abs() < 1e-11);
        let v = prohorov_oracle(&two_point(), &z).unwrap();
        assert!((v - 0.5).abs() < 1e-11);
    }

    #[test]
    fn oracle_refuses_large_supports() {
        let pts: Vec<f64> = (0..8).map(f64::from).collect();
        let shifted: Vec<f64> = pts.iter().map(|p| p + 0.5).collect();
        let mu = DiscreteMeasure::uniform(&pts).unwrap();
        let nu = DiscreteMeasure::uniform(&shifted).unwrap();
        assert_eq!(prohorov_oracle(&mu, &nu), Err(Error::OracleSize(16, ORACLE_MAX_ATOMS)));
    }

    #[test]
    fn coupling_examples() {
        let z = DiscreteMeasure::dirac(0.0);
        match strassen_coupling(&z, &z, 0.1).unwrap() {
            CouplingOutcome::Feasible(c) => {
                assert_eq!(c.mass, vec![vec![1.0]]);
                assert_eq!(c.violation(0.1), 0.0);
            }
            other => panic!("{other:?}"),
        }
        let far = strassen_coupling(&z, &DiscreteMeasure::dirac(1.0), 0.3).unwrap();
        assert_eq!(far, CouplingOutcome::Infeasible { deficit: 1.0 });

        match strassen_coupling(&two_point(), &z, 0.5).unwrap() {
            CouplingOutcome::Feasible(c) => {
                assert_eq!(c.mass, vec![vec![0.5], vec![0.5]]);
                assert_eq!(c.violation(0.5), 0.5);
            }
            other => panic!("{other:?}"),
        }
        assert!(strassen_coupling(&z, &z, -1.0).is_err());
    }
}

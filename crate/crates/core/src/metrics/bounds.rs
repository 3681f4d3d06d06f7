//! Mixture stability of the Prohorov distance.
//!
//! If the pairs `(mu_i, nu_i)` at distance `>= eps` carry total weight at
//! most `eps`, the mixtures `sum c_i mu_i` and `sum c_i nu_i` are within
//! `2 eps`. The random-measure form is the same statement with the weights
//! given by the atoms of a common probability space.

use super::prohorov_distance;
use crate::error::{Error, Result};
use crate::measures::{compensated_sum, mixture, DiscreteMeasure, RandomMeasure, MASS_TOLERANCE};

/// Slack added to `2 eps` when deciding `holds`.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub lhs: f64,
    pub bound: f64,
    pub holds: bool,
}

fn bad_mass<'a>(pairs: impl Iterator<Item = (f64, &'a DiscreteMeasure, &'a DiscreteMeasure)>, eps: f64) -> f64 {
    compensated_sum(pairs.filter(|(_, m, n)| prohorov_distance(m, n) >= eps).map(|(c, _, _)| c))
}

fn finish<'a>(
    pairs: impl Iterator<Item = (f64, &'a DiscreteMeasure, &'a DiscreteMeasure)> + Clone,
    eps: f64,
) -> Result<BoundCheck> {
    let left = mixture(pairs.clone().map(|(c, m, _)| (c, m)))?;
    let right = mixture(pairs.map(|(c, _, n)| (c, n)))?;
    let lhs = prohorov_distance(&left, &right);
    let bound = 2.0 * eps;
    Ok(BoundCheck { lhs, bound, holds: lhs <= bound + BOUND_SLACK })
}

/// Checks `rho(sum c_i mu_i, sum c_i nu_i) <= 2 eps` after verifying its
/// hypothesis.
pub fn mixture_bound_check(pairs: &[(f64, DiscreteMeasure, DiscreteMeasure)], eps: f64) -> Result<BoundCheck> {
    if pairs.is_empty() {
        return Err(Error::BadParameter("no pairs".into()));
    }
    if pairs.iter().any(|p| !(p.0 >= 0.0)) {
        return Err(Error::BadParameter("negative mixture weight".into()));
    }
    let total = compensated_sum(pairs.iter().map(|p| p.0));
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::BadParameter(format!("mixture weights sum to {total}")));
    }
    let iter = pairs.iter().map(|(c, m, n)| (*c, m, n));
    let bad = bad_mass(iter.clone(), eps);
    if bad > eps {
        return Err(Error::StatementBPrecondition { bad_mass: bad, eps });
    }
    finish(iter, eps)
}

/// Same bound for two random measures defined on the same atoms: the
/// components must pair up with identical weights.
pub fn random_measure_bound_check(first: &RandomMeasure, second: &RandomMeasure, eps: f64) -> Result<BoundCheck> {
    if first.len() != second.len() {
        return Err(Error::AtomMismatch(format!("{} atoms vs {} atoms", first.len(), second.len())));
    }
    for (k, (a, b)) in first.weights().zip(second.weights()).enumerate() {
        if (a - b).abs() > MASS_TOLERANCE {
            return Err(Error::AtomMismatch(format!("atom {k} has probability {a} vs {b}")));
        }
    }
    let iter = first.components().iter().zip(second.components()).map(|((w, m), (_, n))| (*w, m, n));
    let bad = bad_mass(iter.clone(), eps);
    if bad > eps {
        return Err(Error::StatementCPrecondition { bad_mass: bad, eps });
    }
    finish(iter, eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> DiscreteMeasure {
        DiscreteMeasure::dirac(x)
    }

    #[test]
    fn identical_pairs_give_zero() {
        let pairs = vec![(0.3, d(0.0), d(0.0)), (0.7, DiscreteMeasure::rademacher(), DiscreteMeasure::rademacher())];
        let check = mixture_bound_check(&pairs, 0.05).unwrap();
        assert_eq!(check.lhs, 0.0);
        assert!(check.holds);
    }

    #[test]
    fn precondition_is_enforced() {
        // A single pair at distance 0.2 carries weight 1 > eps = 0.2.
        let pairs = vec![(1.0, d(0.0), d(0.2))];
        assert!(matches!(mixture_bound_check(&pairs, 0.2), Err(Error::StatementBPrecondition { .. })));
        // Above the pair distance the hypothesis holds and the bound is 2 eps.
        let check = mixture_bound_check(&pairs, 0.2000001).unwrap();
        assert_eq!(check.lhs, prohorov_distance(&d(0.0), &d(0.2)));
        assert!(check.lhs <= 0.4 && check.holds);
    }

    #[test]
    fn random_measure_cases() {
        let a = RandomMeasure::new(vec![(0.9, d(0.0)), (0.1, d(0.0))]).unwrap();
        let b = RandomMeasure::new(vec![(0.9, d(0.0)), (0.1, d(3.0))]).unwrap();
        assert_eq!(random_measure_bound_check(&a, &a, 0.1).unwrap().lhs, 0.0);
        let check = random_measure_bound_check(&a, &b, 0.1).unwrap();
        assert!((check.lhs - 0.1).abs() < 1e-11 && check.holds);
        assert!(matches!(random_measure_bound_check(&a, &b, 0.05), Err(Error::StatementCPrecondition { .. })));
        let single = RandomMeasure::new(vec![(1.0, d(0.0))]).unwrap();
        assert!(matches!(random_measure_bound_check(&a, &single, 0.1), Err(Error::AtomMismatch(_))));
        let reweighted = RandomMeasure::new(vec![(0.5, d(0.0)), (0.5, d(0.0))]).unwrap();
        assert!(matches!(random_measure_bound_check(&a, &reweighted, 0.1), Err(Error::AtomMismatch(_))));
    }
}

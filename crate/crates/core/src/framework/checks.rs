use rand::Rng;
use rayon::prelude::*;

use super::RegularLimitTheorem;
use crate::error::{Error, Result};
use crate::measures::{empirical_measure, DiscreteMeasure, EmpiricalSample, Provenance};
use crate::metrics::{ks_distance, prohorov_distance, wasserstein2};
use crate::seed;

/// Monte Carlo allowance `3 sqrt(ln M / M)` for comparisons of empirical laws.
pub fn mc_tolerance(m: usize) -> f64 {
    let m = m.max(2) as f64;
    3.0 * (m.ln() / m).sqrt()
}

fn window_len<T: RegularLimitTheorem + ?Sized>(t: &T, k: usize) -> usize {
    let (p, q) = t.window(k);
    q + 1 - p
}

/// `M` evaluations of `f_k` on i.i.d. draws from `mu`. Only the window is
/// drawn, since `f_k` ignores the other coordinates. Sample `i` uses the
/// stream derived from `(seed, i)`.
pub fn simulate_fk<T: RegularLimitTheorem + ?Sized>(
    t: &T,
    k: usize,
    mu: &DiscreteMeasure,
    m: usize,
    seed: u64,
) -> Result<EmpiricalSample> {
    if k == 0 || m == 0 {
        return Err(Error::BadParameter("k and M must be >= 1".into()));
    }
    if !t.in_domain(mu) {
        return Err(Error::OutsideS);
    }
    let len = window_len(t, k);
    let values = (0..m as u64)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(len),
            |buf, i| {
                let mut rng = seed::task_rng(seed, i);
                buf.clear();
                buf.extend((0..len).map(|_| mu.draw(&mut rng)));
                t.evaluate(k, buf, mu)
            },
        )
        .collect();
    Ok(EmpiricalSample::new(values, Provenance::new(format!("{}:k={k}", t.name()), seed)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub k: usize,
    pub ks: f64,
}

/// KS distance between the simulated law of `f_k` and `G_mu` for each `k`.
/// Each `k` gets its own derived seed.
pub fn limit_convergence_check<T: RegularLimitTheorem + ?Sized>(
    t: &T,
    mu: &DiscreteMeasure,
    k_list: &[usize],
    m: usize,
    seed: u64,
) -> Result<Vec<ConvergenceRow>> {
    let limit = t.limit(mu)?;
    k_list
        .iter()
        .map(|&k| {
            let sample = simulate_fk(t, k, mu, m, seed::derive(seed, k as u64))?;
            Ok(ConvergenceRow { k, ks: ks_distance(&empirical_measure(&sample)?, &limit) })
        })
        .collect()
}

/// `|f_k(x) - f_k(x')| / ((1 / omega_k) sum_{window} |x_i - x'_i|^alpha)`
/// for full-length inputs (at least `q_k` coordinates). `None` when the
/// inputs agree on the window.
pub fn lipschitz_ratio<T: RegularLimitTheorem + ?Sized>(
    t: &T,
    k: usize,
    x: &[f64],
    x_prime: &[f64],
    mu: &DiscreteMeasure,
) -> Option<f64> {
    let (p, q) = t.window(k);
    let (w, w_prime) = (&x[p - 1..q], &x_prime[p - 1..q]);
    let alpha = t.alpha();
    let spread: f64 = w.iter().zip(w_prime).map(|(a, b)| (a - b).abs().powf(alpha)).sum::<f64>() / t.modulus(k);
    if spread == 0.0 {
        return None;
    }
    Some((t.evaluate(k, w, mu) - t.evaluate(k, w_prime, mu)).abs() / spread)
}

/// Largest Lipschitz ratio over `trials` random input pairs sharing one
/// random three-atom `mu`. Perturbations of size in [0.1, 1) hit a random
/// subset of the window.
pub fn lipschitz_probe<T: RegularLimitTheorem + ?Sized>(t: &T, k: usize, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 || k == 0 {
        return Err(Error::BadParameter("trials and k must be >= 1".into()));
    }
    let (_, q) = t.window(k);
    let ratios: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::task_rng(seed, i);
            let atoms: Vec<(f64, f64)> = (0..3).map(|_| (rng.gen_range(-2.0..2.0), rng.gen_range(0.1..1.0))).collect();
            let total: f64 = atoms.iter().map(|a| a.1).sum();
            let mu = DiscreteMeasure::from_unsorted(atoms.into_iter().map(|(p, w)| (p, w / total)).collect())
                .expect("normalised weights");
            let x: Vec<f64> = (0..q).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let hit = rng.gen_range(0.05..1.0);
            let x_prime: Vec<f64> =
                x.iter()
                    .map(|&v| {
                        if rng.gen_bool(hit) {
                            let size: f64 = rng.gen_range(0.1..1.0);
                            if rng.gen() { v + size } else { v - size }
                        } else {
                            v
                        }
                    })
                    .collect();
            lipschitz_ratio(t, k, &x, &x_prime, &mu).unwrap_or(0.0)
        })
        .collect();
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

/// Outcome of a single transfer-inequality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatementA {
    /// `rho(mu, nu)`.
    pub eps: f64,
    /// Prohorov distance between the simulated laws of `f_k` under `mu`, `nu`.
    pub lhs: f64,
    /// `eps^alpha q_k + W2(mu, nu)`.
    pub rhs: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// Compares `rho(f_k(mu), f_k(nu))` with `rho(mu, nu)^alpha q_k + W2(mu, nu)`.
/// Both laws are simulated from the same seed, so the draws are coupled by
/// inversion of common uniforms.
pub fn statement_a_check<T: RegularLimitTheorem + ?Sized>(
    t: &T,
    k: usize,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    m: usize,
    seed: u64,
) -> Result<StatementA> {
    let eps = prohorov_distance(mu, nu);
    let left = empirical_measure(&simulate_fk(t, k, mu, m, seed)?)?;
    let right = empirical_measure(&simulate_fk(t, k, nu, m, seed)?)?;
    let lhs = prohorov_distance(&left, &right);
    let (_, q) = t.window(k);
    let rhs = eps.powf(t.alpha()) * q as f64 + wasserstein2(mu, nu);
    let tolerance = mc_tolerance(m);
    Ok(StatementA { eps, lhs, rhs, tolerance, holds: lhs <= rhs + tolerance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::{make_clt, make_trimmed_clt};

    #[test]
    fn point_mass_gives_exact_zeros() {
        for c in [0.0, 0.1, -3.7, 1e6] {
            let s = simulate_fk(&make_clt(), 17, &DiscreteMeasure::dirac(c), 200, 1).unwrap();
            assert!(s.values.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn simulation_is_reproducible() {
        let mu = DiscreteMeasure::rademacher();
        let a = simulate_fk(&make_trimmed_clt(), 30, &mu, 300, 8).unwrap();
        let b = simulate_fk(&make_trimmed_clt(), 30, &mu, 300, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values, simulate_fk(&make_trimmed_clt(), 30, &mu, 300, 9).unwrap().values);
    }

    #[test]
    fn rademacher_at_k1_is_two_point() {
        let rows = limit_convergence_check(&make_clt(), &DiscreteMeasure::rademacher(), &[1], 20_000, 3).unwrap();
        assert!((rows[0].ks - 0.341_344_746_068_543).abs() < 0.02, "{}", rows[0].ks);
    }

    #[test]
    fn lipschitz_bounds() {
        for k in [1, 2, 7, 16, 100] {
            assert!(lipschitz_probe(&make_clt(), k, 200, k as u64).unwrap() <= 1.0 + 1e-12);
            assert!(lipschitz_probe(&make_trimmed_clt(), k, 200, k as u64).unwrap() <= 1.0 + 1e-12);
        }
        let mu = DiscreteMeasure::dirac(0.0);
        let x = vec![0.0; 9];
        let mut y = x.clone();
        y[4] = 1.0;
        assert_eq!(lipschitz_ratio(&make_clt(), 9, &x, &y, &mu), Some(1.0));
        assert_eq!(lipschitz_ratio(&make_clt(), 9, &x, &x, &mu), None);
    }

    #[test]
    fn statement_a_examples() {
        let r = DiscreteMeasure::rademacher();
        let same = statement_a_check(&make_clt(), 4, &r, &r, 2000, 1).unwrap();
        assert_eq!(same.lhs, 0.0);
        assert!(same.holds);
        let shifted = r.shifted(0.1).unwrap();
        let check = statement_a_check(&make_clt(), 4, &r, &shifted, 5000, 2).unwrap();
        assert!(check.holds, "{check:?}");
    }

    #[test]
    fn outside_domain_is_reported() {
        struct Nothing;
        impl RegularLimitTheorem for Nothing {
            fn name(&self) -> &'static str {
                "nothing"
            }
            fn alpha(&self) -> f64 {
                1.0
            }
            fn window(&self, k: usize) -> (usize, usize) {
                (1, k)
            }
            fn modulus(&self, _k: usize) -> f64 {
                1.0
            }
            fn modulus_root_floor(&self, _k: usize, _r: u32) -> u64 {
                1
            }
            fn evaluate(&self, _k: usize, _w: &[f64], _mu: &DiscreteMeasure) -> f64 {
                0.0
            }
            fn in_domain(&self, _mu: &DiscreteMeasure) -> bool {
                false
            }
            fn limit(&self, _mu: &DiscreteMeasure) -> Result<crate::measures::MixedNormal> {
                Ok(crate::measures::MixedNormal::standard())
            }
        }
        assert_eq!(simulate_fk(&Nothing, 3, &DiscreteMeasure::rademacher(), 10, 0), Err(Error::OutsideS));
    }
}

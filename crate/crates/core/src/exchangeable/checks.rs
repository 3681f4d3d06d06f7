use rayon::prelude::*;

use super::draw::fill_run;
use super::ExchangeableModel;
use crate::error::{Error, Result};
use crate::framework::{mc_tolerance, simulate_fk, RegularLimitTheorem, ThinningPlan};
use crate::measures::{empirical_measure, mixture, EmpiricalSample, Provenance};
use crate::metrics::{ks_distance, prohorov_distance};
use crate::seed;
use crate::sequences::Permutation;

/// `M` independent runs of `f_k(Y_1, Y_2, ..., mu_A)` where
/// `Y_j = X_{sigma(j)}` and `mu_A` is the law of the run's atom. Each run
/// draws `max(q_k, |sigma|)` terms at perturbation level `eps_k`.
pub fn permuted_statistic<T: RegularLimitTheorem + ?Sized>(
    model: &ExchangeableModel,
    t: &T,
    k: usize,
    perm: &Permutation,
    m: usize,
    seed: u64,
) -> Result<EmpiricalSample> {
    let (p, q) = t.window(k);
    if perm.len() < q {
        return Err(Error::PermSize(format!("permutation of length {} cannot cover q_k = {q}", perm.len())));
    }
    if m == 0 {
        return Err(Error::BadParameter("M must be >= 1".into()));
    }
    let len = perm.len().max(q);
    let level = model.perturb().level(k);
    let values = (0..m as u64)
        .into_par_iter()
        .map_init(
            || (Vec::with_capacity(len), Vec::with_capacity(len), Vec::with_capacity(q)),
            |(z, x, window), i| {
                let mut rng = seed::task_rng(seed, i);
                let (atom, _) = fill_run(model, len, level, &mut rng, z, x);
                window.clear();
                window.extend(perm.image()[p - 1..q].iter().map(|&j| x[j - 1]));
                t.evaluate(k, window, &model.atoms()[atom].1)
            },
        )
        .collect();
    Ok(EmpiricalSample::new(values, Provenance::new(format!("permuted:{}:k={k}", t.name()), seed)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2Report {
    /// Largest two-sample KS distance between permutations.
    pub max_pairwise_ks: f64,
    /// KS distance of each permuted law to the mixed normal limit.
    pub ks_to_limit: Vec<f64>,
    pub tolerance: f64,
    pub holds: bool,
}

impl Theorem2Report {
    pub fn max_ks_to_limit(&self) -> f64 {
        self.ks_to_limit.iter().copied().fold(0.0, f64::max)
    }
}

/// Simulates the permuted statistic for each permutation (independent
/// derived seeds) and compares the laws with each other and with
/// `sum_A P(A) N(0, Var mu_A)`.
pub fn theorem2_check<T: RegularLimitTheorem + ?Sized>(
    model: &ExchangeableModel,
    t: &T,
    k: usize,
    perms: &[Permutation],
    m: usize,
    seed: u64,
    tolerance: f64,
) -> Result<Theorem2Report> {
    if perms.len() < 2 {
        return Err(Error::BadParameter("need at least two permutations".into()));
    }
    let limit = model.mixed_normal_limit()?;
    let laws = perms
        .iter()
        .enumerate()
        .map(|(j, perm)| empirical_measure(&permuted_statistic(model, t, k, perm, m, seed::derive(seed, j as u64))?))
        .collect::<Result<Vec<_>>>()?;
    let ks_to_limit: Vec<f64> = laws.iter().map(|law| ks_distance(law, &limit)).collect();
    let mut max_pairwise_ks: f64 = 0.0;
    for (i, a) in laws.iter().enumerate() {
        for b in &laws[i + 1..] {
            max_pairwise_ks = max_pairwise_ks.max(ks_distance(a, b));
        }
    }
    let holds = max_pairwise_ks <= tolerance && ks_to_limit.iter().all(|&d| d <= tolerance);
    Ok(Theorem2Report { max_pairwise_ks, ks_to_limit, tolerance, holds })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropositionCheck {
    pub k: usize,
    pub r_k: usize,
    pub eps: f64,
    pub lhs: f64,
    /// `3 eps_{r_k}^alpha q_k + 1 / r_k`.
    pub rhs: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// Prohorov distance between the simulated law of `f_k` on the perturbed
/// model (perturbation level `eps_{r_k}` from the plan) and the mixture
/// `sum_A P(A) law(f_k; mu_A)`, each component simulated separately.
pub fn proposition_bound_check<T: RegularLimitTheorem + ?Sized>(
    model: &ExchangeableModel,
    t: &T,
    k: usize,
    plan: &ThinningPlan,
    m: usize,
    seed: u64,
) -> Result<PropositionCheck> {
    let r_k = plan.r_k(k).ok_or(Error::PlanInfeasible { k })?;
    let eps = plan.eps_m(r_k).ok_or(Error::PlanInfeasible { k })?;
    if model.bad_mass() > eps {
        return Err(Error::BadMass { bad_mass: model.bad_mass(), eps });
    }
    let (_, q) = t.window(k);
    let mut spec = *model.perturb();
    spec.eps = eps;
    spec.eps_decay = 0.0;
    let at_level = model.clone().with_perturb(spec, model.bad_mass())?;
    let observed = permuted_statistic(&at_level, t, k, &Permutation::identity(q), m, seed::derive(seed, 0))?;
    let components = model
        .atoms()
        .iter()
        .enumerate()
        .map(|(a, (_, law))| empirical_measure(&simulate_fk(t, k, law, m, seed::derive(seed, 1 + a as u64))?))
        .collect::<Result<Vec<_>>>()?;
    let target = mixture(model.atoms().iter().zip(&components).map(|((w, _), c)| (*w, c)))?;
    let lhs = prohorov_distance(&empirical_measure(&observed)?, &target);
    let rhs = 3.0 * eps.powf(plan.alpha()) * q as f64 + 1.0 / r_k as f64;
    let tolerance = mc_tolerance(m);
    Ok(PropositionCheck { k, r_k, eps, lhs, rhs, tolerance, holds: lhs <= rhs + tolerance })
}

/// Running strong-law statistic along one drawn sequence of length `n`:
/// `n^-1 sum X_j` for `p = 1`, otherwise `n^(-1/p) sum (X_j - X)` with `X`
/// the mean of the run's atom law.
pub fn strong_law_trajectory(model: &ExchangeableModel, p: f64, n: usize, seed: u64) -> Result<Vec<(usize, f64)>> {
    if !(p > 0.0 && p <= 2.0) {
        return Err(Error::BadParameter(format!("p must lie in (0, 2], got {p}")));
    }
    if n == 0 {
        return Err(Error::BadParameter("N must be >= 1".into()));
    }
    let mut rng = seed::rng(seed);
    let (mut z, mut x) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let (atom, _) = fill_run(model, n, model.perturb().level(1), &mut rng, &mut z, &mut x);
    let mean = model.atoms()[atom].1.mean();
    let mut sum = 0.0;
    Ok(x
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let count = (i + 1) as f64;
            if p == 1.0 {
                sum += v;
                (i + 1, sum / count)
            } else {
                sum += v - mean;
                (i + 1, sum / count.powf(1.0 / p))
            }
        })
        .collect())
}

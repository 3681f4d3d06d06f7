use permlab::measures::{DiscreteMeasure, MixedNormal};
use permlab::metrics::{
    deficit, ks_distance, prohorov_distance, prohorov_oracle, strassen_coupling, wasserstein2, CouplingOutcome,
};
use proptest::prelude::*;

fn measure(max_atoms: usize) -> impl Strategy<Value = DiscreteMeasure> {
    prop::collection::vec((0.0f64..1.0, 0.05f64..1.0), 1..=max_atoms).prop_map(|atoms| {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        DiscreteMeasure::from_unsorted(atoms.into_iter().map(|(p, m)| (p, m / total)).collect()).unwrap()
    })
}

/// Measures whose masses are multiples of 1/6, expanded into six equally
/// weighted points (positions may repeat).
fn sixths() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 6)
}

fn from_points(points: &[f64]) -> DiscreteMeasure {
    let w = 1.0 / points.len() as f64;
    DiscreteMeasure::from_unsorted(points.iter().map(|&p| (p, w)).collect()).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Optimal assignment over all permutations; for uniform measures on `n`
/// points the extreme couplings are permutation matrices.
fn w2_by_assignment(x: &[f64], y: &[f64]) -> f64 {
    permutations(x.len())
        .iter()
        .map(|p| p.iter().enumerate().map(|(i, &j)| (x[i] - y[j]).powi(2)).sum::<f64>() / x.len() as f64)
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prohorov_matches_subset_oracle(mu in measure(6), nu in measure(6)) {
        let fast = prohorov_distance(&mu, &nu);
        let slow = prohorov_oracle(&mu, &nu).unwrap();
        prop_assert!((fast - slow).abs() <= 1e-9, "{} vs {}", fast, slow);
    }

    #[test]
    fn prohorov_is_a_metric(a in measure(5), b in measure(5), c in measure(5)) {
        let ab = prohorov_distance(&a, &b);
        prop_assert_eq!(ab, prohorov_distance(&b, &a));
        prop_assert_eq!(prohorov_distance(&a, &a), 0.0);
        prop_assert!((0.0..=1.0).contains(&ab));
        let ac = prohorov_distance(&a, &c);
        let cb = prohorov_distance(&c, &b);
        prop_assert!(ab <= ac + cb + 1e-12);
    }

    #[test]
    fn prohorov_is_the_fixed_point_of_the_deficit(mu in measure(6), nu in measure(6)) {
        let d = prohorov_distance(&mu, &nu);
        prop_assert!(deficit(&mu, &nu, d) <= d + 1e-12);
        if d > 1e-9 {
            let below = d - 1e-9;
            prop_assert!(deficit(&mu, &nu, below) > below);
        }
    }

    #[test]
    fn strassen_coupling_is_feasible_just_above_the_distance(mu in measure(6), nu in measure(6)) {
        let eps = prohorov_distance(&mu, &nu) + 1e-9;
        match strassen_coupling(&mu, &nu, eps).unwrap() {
            CouplingOutcome::Feasible(c) => {
                prop_assert!(c.marginal_error(&mu, &nu) <= 1e-12);
                prop_assert!(c.violation(eps) <= eps);
                prop_assert!(c.mass.iter().flatten().all(|&m| m >= 0.0));
            }
            CouplingOutcome::Infeasible { deficit } => prop_assert!(false, "infeasible, deficit {}", deficit),
        }
    }

    #[test]
    fn wasserstein_matches_assignment(x in sixths(), y in sixths()) {
        let exact = w2_by_assignment(&x, &y);
        let fast = wasserstein2(&from_points(&x), &from_points(&y));
        prop_assert!((fast - exact).abs() <= 1e-9, "{} vs {}", fast, exact);
    }

    #[test]
    fn wasserstein_dominates_squared_prohorov(mu in measure(6), nu in measure(6)) {
        // Markov on an optimal W1 coupling at level sqrt(W1) gives rho^2 <= W1 <= W2.
        let rho = prohorov_distance(&mu, &nu);
        prop_assert!(rho * rho <= wasserstein2(&mu, &nu) + 1e-12);
    }

    #[test]
    fn ks_is_a_metric_and_bounded(a in measure(6), b in measure(6), c in measure(6)) {
        let ab = ks_distance(&a, &b);
        prop_assert_eq!(ab, ks_distance(&b, &a));
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!(ab <= ks_distance(&a, &c) + ks_distance(&c, &b) + 1e-12);
    }
}

#[test]
fn ks_against_normal_scan() {
    // Brute-force one-sided scan on a fine grid never exceeds the exact value.
    let mu = DiscreteMeasure::new(vec![(-0.7, 0.2), (0.1, 0.5), (1.3, 0.3)]).unwrap();
    let g = MixedNormal::normal(0.8).unwrap();
    let exact = ks_distance(&mu, &g);
    let scanned = (-40_000..=40_000)
        .map(|i| {
            let t = i as f64 * 1e-4;
            (mu.cdf(t) - g.cdf(t)).abs()
        })
        .fold(0.0, f64::max);
    assert!(scanned <= exact + 1e-15);
    assert!(exact - scanned < 1e-3);
}

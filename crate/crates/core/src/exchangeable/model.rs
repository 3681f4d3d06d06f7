use rand::Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::measures::{compensated_sum, measure_from_csv, DiscreteMeasure, MixedNormal, RandomMeasure, MASS_TOLERANCE};
use crate::seed;

/// Default quantisation step, `2^-20`.
pub const DEFAULT_GRID: f64 = 1.0 / 1_048_576.0;

/// Perturbation parameters. The level schedule is
/// `eps_m = eps * m^(-eps_decay)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbSpec {
    pub eps: f64,
    #[serde(default)]
    pub eps_decay: f64,
    pub outlier_prob: f64,
    pub outlier_size: f64,
}

impl PerturbSpec {
    pub fn off() -> Self {
        PerturbSpec { eps: 1.0, eps_decay: 0.0, outlier_prob: 0.0, outlier_size: 0.0 }
    }

    pub fn level(&self, m: usize) -> f64 {
        self.eps * (m.max(1) as f64).powf(-self.eps_decay)
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::BadParameter(format!("eps must lie in (0, 1], got {}", self.eps)));
        }
        if !(self.eps_decay >= 0.0 && self.eps_decay.is_finite()) {
            return Err(Error::BadParameter(format!("eps_decay must be >= 0, got {}", self.eps_decay)));
        }
        if !(0.0..=1.0).contains(&self.outlier_prob) {
            return Err(Error::BadParameter(format!("outlier_prob {} is not a probability", self.outlier_prob)));
        }
        if !self.outlier_size.is_finite() {
            return Err(Error::BadParameter("outlier_size must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeableModel {
    atoms: Vec<(f64, DiscreteMeasure)>,
    bad_mass: f64,
    perturb: PerturbSpec,
    grid: f64,
}

impl ExchangeableModel {
    /// `grid = 0` disables quantisation.
    pub fn new(atoms: Vec<(f64, DiscreteMeasure)>, bad_mass: f64, perturb: PerturbSpec, grid: f64) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::BadParameter("model needs at least one atom".into()));
        }
        if atoms.iter().any(|a| !(a.0 > 0.0)) {
            return Err(Error::BadParameter("atom probabilities must be positive".into()));
        }
        let total = compensated_sum(atoms.iter().map(|a| a.0));
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::BadParameter(format!("atom probabilities sum to {total}")));
        }
        if !(0.0..=1.0).contains(&bad_mass) {
            return Err(Error::BadParameter(format!("bad_mass {bad_mass} is not a probability")));
        }
        if !(grid >= 0.0 && grid.is_finite()) {
            return Err(Error::BadParameter(format!("grid must be >= 0, got {grid}")));
        }
        perturb.validate()?;
        Ok(ExchangeableModel { atoms, bad_mass, perturb, grid })
    }

    /// Single atom, no perturbation, no quantisation.
    pub fn iid(law: DiscreteMeasure) -> Self {
        ExchangeableModel { atoms: vec![(1.0, law)], bad_mass: 0.0, perturb: PerturbSpec::off(), grid: 0.0 }
    }

    /// Equal-weight atoms, no perturbation, no quantisation.
    pub fn mixture_of(laws: Vec<DiscreteMeasure>) -> Result<Self> {
        let w = 1.0 / laws.len() as f64;
        ExchangeableModel::new(laws.into_iter().map(|l| (w, l)).collect(), 0.0, PerturbSpec::off(), 0.0)
    }

    pub fn atoms(&self) -> &[(f64, DiscreteMeasure)] {
        &self.atoms
    }

    pub fn bad_mass(&self) -> f64 {
        self.bad_mass
    }

    pub fn perturb(&self) -> &PerturbSpec {
        &self.perturb
    }

    pub fn grid(&self) -> f64 {
        self.grid
    }

    pub fn with_perturb(mut self, perturb: PerturbSpec, bad_mass: f64) -> Result<Self> {
        perturb.validate()?;
        if !(0.0..=1.0).contains(&bad_mass) {
            return Err(Error::BadParameter(format!("bad_mass {bad_mass} is not a probability")));
        }
        self.perturb = perturb;
        self.bad_mass = bad_mass;
        Ok(self)
    }

    /// The directing random measure: `mu_A` on atom `A`.
    pub fn random_measure(&self) -> RandomMeasure {
        RandomMeasure::new(self.atoms.clone()).expect("validated on construction")
    }

    /// `sum_A P(A) N(0, Var mu_A)`.
    pub fn mixed_normal_limit(&self) -> Result<MixedNormal> {
        MixedNormal::new(self.atoms.iter().map(|(p, law)| (law.mean_var().1, *p)).collect())
    }

    pub(crate) fn pick_atom<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, (p, _)) in self.atoms.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        self.atoms.len() - 1
    }

    pub(crate) fn quantize(&self, v: f64) -> f64 {
        if self.grid == 0.0 {
            v
        } else {
            (v / self.grid).round() * self.grid + 0.0
        }
    }

    /// Upper bound on `sup_j P(|X_j| >= t)`: a term exceeds `t` only if
    /// `|Z_j| >= t - g`, or it is an outlier (probability at most
    /// `outlier_prob + bad_mass`) and `|Z_j| >= t - |outlier_size| - g`.
    pub fn tail_bound(&self, t: f64) -> f64 {
        let q = (self.perturb.outlier_prob + self.bad_mass).min(1.0);
        let size = self.perturb.outlier_size.abs();
        let exceed = |law: &DiscreteMeasure, s: f64| -> f64 {
            compensated_sum(law.atoms().filter(|(p, _)| p.abs() >= s).map(|(_, m)| m))
        };
        let total = compensated_sum(
            self.atoms
                .iter()
                .map(|(w, law)| w * (exceed(law, t - self.grid) + q * exceed(law, t - size - self.grid))),
        );
        total.min(1.0)
    }

    /// Conditional laws `mu~_n` differing from `mu~`: atoms are visited in
    /// order and, while their cumulative probability stays within `eps_n`,
    /// shifted by `2 eps_n`; every other atom is shifted by a uniform amount
    /// in `[0, eps_n / 2)`. Hence `P(rho(mu~_n, mu~) >= eps_n) <= eps_n`.
    pub fn noisy_conditional_laws(&self, eps_n: f64, seed: u64) -> Result<RandomMeasure> {
        if !(eps_n > 0.0 && eps_n < 0.5) {
            return Err(Error::BadParameter(format!("eps_n must lie in (0, 0.5), got {eps_n}")));
        }
        let mut rng = seed::rng(seed);
        let mut used = 0.0;
        let components = self
            .atoms
            .iter()
            .map(|(p, law)| {
                let shift = if used + p <= eps_n {
                    used += p;
                    2.0 * eps_n
                } else {
                    rng.gen_range(0.0..eps_n / 2.0)
                };
                Ok((*p, law.shifted(shift)?))
            })
            .collect::<Result<Vec<_>>>()?;
        RandomMeasure::new(components)
    }

    /// Parses the JSON model format. `law_csv` paths are resolved against
    /// `base_dir`.
    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self> {
        let doc: ModelDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let atoms = doc
            .atoms
            .into_iter()
            .map(|a| {
                let path = base_dir.join(&a.law_csv);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                Ok((a.prob, measure_from_csv(&text)?))
            })
            .collect::<Result<Vec<_>>>()?;
        ExchangeableModel::new(atoms, doc.bad_mass, doc.perturb.unwrap_or_else(PerturbSpec::off), doc.grid)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomDoc {
    prob: f64,
    law_csv: String,
}

fn default_grid() -> f64 {
    DEFAULT_GRID
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    atoms: Vec<AtomDoc>,
    #[serde(default)]
    bad_mass: f64,
    #[serde(default)]
    perturb: Option<PerturbSpec>,
    #[serde(default = "default_grid")]
    grid: f64,
}

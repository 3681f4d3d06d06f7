use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{compensated_sum, Cdf, CompensatedSum, MASS_TOLERANCE};
use crate::error::{Error, Result};
use crate::seed;

/// Finite atomic probability measure on the real line.
///
/// Positions are strictly increasing, masses positive, and the total mass is
/// within [`MASS_TOLERANCE`] of one. Two positions are the same atom only if
/// they are bit-identical (after folding `-0.0` into `0.0`).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    positions: Vec<f64>,
    masses: Vec<f64>,
    // cumulative[i] = F(positions[i]); the last entry is pinned to 1.
    cumulative: Vec<f64>,
}

fn fold_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

impl DiscreteMeasure {
    /// Builds a measure from atoms already sorted by position.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        let mut positions = Vec::with_capacity(atoms.len());
        let mut masses = Vec::with_capacity(atoms.len());
        for (p, m) in atoms {
            if !p.is_finite() {
                return Err(Error::InvalidMeasure(format!("position {p} is not finite")));
            }
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::InvalidMeasure(format!("mass {m} at {p} is not positive")));
            }
            let p = fold_zero(p);
            if let Some(&last) = positions.last() {
                if p <= last {
                    return Err(Error::InvalidMeasure(format!(
                        "positions not strictly increasing at {p}"
                    )));
                }
            }
            positions.push(p);
            masses.push(m);
        }
        let total = compensated_sum(masses.iter().copied());
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMeasure(format!("total mass {total} differs from 1")));
        }
        let mut acc = CompensatedSum::default();
        let mut cumulative: Vec<f64> = masses
            .iter()
            .map(|&m| {
                acc.add(m);
                acc.value().min(1.0)
            })
            .collect();
        *cumulative.last_mut().expect("nonempty") = 1.0;
        Ok(DiscreteMeasure { positions, masses, cumulative })
    }

    /// Sorts atoms, merges bit-identical positions, then validates.
    pub fn from_unsorted(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.iter().any(|(p, _)| p.is_nan()) {
            return Err(Error::InvalidMeasure("NaN position".into()));
        }
        for a in atoms.iter_mut() {
            a.0 = fold_zero(a.0);
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (p, m) in atoms {
            match merged.last_mut() {
                Some(last) if last.0.to_bits() == p.to_bits() => last.1 += m,
                _ => merged.push((p, m)),
            }
        }
        DiscreteMeasure::new(merged)
    }

    /// Point mass at `x`.
    pub fn dirac(x: f64) -> Self {
        DiscreteMeasure::new(vec![(x, 1.0)]).expect("finite position")
    }

    /// Uniform measure on the given distinct points.
    pub fn uniform(points: &[f64]) -> Result<Self> {
        let m = 1.0 / points.len() as f64;
        DiscreteMeasure::from_unsorted(points.iter().map(|&p| (p, m)).collect())
    }

    /// The symmetric ±1 law.
    pub fn rademacher() -> Self {
        DiscreteMeasure::new(vec![(-1.0, 0.5), (1.0, 0.5)]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.positions.iter().copied().zip(self.masses.iter().copied())
    }

    /// `F(t) = mu((-inf, t])`.
    pub fn cdf(&self, t: f64) -> f64 {
        let idx = self.positions.partition_point(|&p| p <= t);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// `F(t-) = mu((-inf, t))`.
    pub fn cdf_left(&self, t: f64) -> f64 {
        let idx = self.positions.partition_point(|&p| p < t);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// Generalised inverse `inf { t : F(t) >= u }` for `u` in (0, 1).
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::QuantileDomain(u));
        }
        let idx = self.cumulative.partition_point(|&c| c < u);
        Ok(self.positions[idx.min(self.positions.len() - 1)])
    }

    /// Cumulative masses `F(x_i)` at the atoms.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// One draw by inversion of a uniform on [0, 1).
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let idx = self.cumulative.partition_point(|&c| c <= u);
        self.positions[idx.min(self.positions.len() - 1)]
    }

    /// `m` i.i.d. draws from a single stream seeded by `seed`.
    pub fn sample(&self, m: usize, seed: u64) -> EmpiricalSample {
        let mut rng = seed::rng(seed);
        let values = (0..m).map(|_| self.draw(&mut rng)).collect();
        EmpiricalSample::new(values, Provenance::new("sample", seed))
    }

    /// Exact mean and variance.
    pub fn mean_var(&self) -> (f64, f64) {
        let mean = compensated_sum(self.atoms().map(|(p, m)| p * m));
        let var = compensated_sum(self.atoms().map(|(p, m)| m * (p - mean) * (p - mean)));
        (mean, var.max(0.0))
    }

    pub fn mean(&self) -> f64 {
        self.mean_var().0
    }

    /// Image of the measure under `x -> x + shift`.
    pub fn shifted(&self, shift: f64) -> Result<Self> {
        DiscreteMeasure::from_unsorted(self.atoms().map(|(p, m)| (p + shift, m)).collect())
    }
}

impl Cdf for DiscreteMeasure {
    fn cdf(&self, t: f64) -> f64 {
        DiscreteMeasure::cdf(self, t)
    }

    fn cdf_left(&self, t: f64) -> f64 {
        DiscreteMeasure::cdf_left(self, t)
    }

    fn jumps(&self) -> Vec<f64> {
        self.positions.clone()
    }

    fn is_step(&self) -> bool {
        true
    }
}

/// Where a sample came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub experiment: String,
    pub seed: u64,
}

impl Provenance {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        Provenance { experiment: experiment.into(), seed }
    }
}

/// Raw Monte Carlo output together with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl EmpiricalSample {
    pub fn new(values: Vec<f64>, provenance: Provenance) -> Self {
        EmpiricalSample { values, provenance }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample mean and (population) variance.
    pub fn mean_var(&self) -> (f64, f64) {
        let n = self.values.len() as f64;
        let mean = compensated_sum(self.values.iter().copied()) / n;
        let var = compensated_sum(self.values.iter().map(|v| (v - mean) * (v - mean))) / n;
        (mean, var)
    }
}

/// Empirical law of a sample: mass `count / M` per distinct value.
pub fn empirical_measure(sample: &EmpiricalSample) -> Result<DiscreteMeasure> {
    if sample.values.is_empty() {
        return Err(Error::EmptySample);
    }
    let m = sample.values.len();
    let mut values: Vec<f64> = sample.values.iter().map(|&v| fold_zero(v)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidMeasure("non-finite sample value".into()));
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let mut atoms: Vec<(f64, usize)> = Vec::new();
    for v in values {
        match atoms.last_mut() {
            Some(last) if last.0.to_bits() == v.to_bits() => last.1 += 1,
            _ => atoms.push((v, 1)),
        }
    }
    let total = m as f64;
    DiscreteMeasure::new(atoms.into_iter().map(|(p, c)| (p, c as f64 / total)).collect())
}

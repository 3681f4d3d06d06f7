use super::{compensated_sum, DiscreteMeasure, MASS_TOLERANCE};
use crate::error::{Error, Result};

/// A random measure taking finitely many values: on atom `A_i` (probability
/// `weight_i`) it equals `measure_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomMeasure {
    components: Vec<(f64, DiscreteMeasure)>,
}

impl RandomMeasure {
    pub fn new(components: Vec<(f64, DiscreteMeasure)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidMeasure("random measure without components".into()));
        }
        if let Some((w, _)) = components.iter().find(|(w, _)| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidMeasure(format!("component weight {w} is not positive")));
        }
        let total = compensated_sum(components.iter().map(|c| c.0));
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMeasure(format!("component weights sum to {total}")));
        }
        Ok(RandomMeasure { components })
    }

    pub fn components(&self) -> &[(f64, DiscreteMeasure)] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.components.iter().map(|c| c.0)
    }

    /// The averaged measure `sum_i weight_i * measure_i`.
    pub fn flatten(&self) -> DiscreteMeasure {
        mixture(self.components.iter().map(|(w, m)| (*w, m)))
            .expect("convex combination of valid measures is valid")
    }

    /// `E_A mu~((-inf, t])` for `A` the union of the listed atoms.
    pub fn conditional_cdf(&self, atoms: &[usize], t: f64) -> Result<f64> {
        let mut selected = Vec::with_capacity(atoms.len());
        for &i in atoms {
            let c = self
                .components
                .get(i)
                .ok_or_else(|| Error::AtomMismatch(format!("no atom with index {i}")))?;
            selected.push(c);
        }
        let mass = compensated_sum(selected.iter().map(|c| c.0));
        if !(mass > 0.0) {
            return Err(Error::NullEvent);
        }
        let weighted = compensated_sum(selected.iter().map(|(w, m)| w * m.cdf(t)));
        Ok((weighted / mass).clamp(0.0, 1.0))
    }
}

/// Convex combination `sum c_i mu_i`, merged and re-sorted.
pub(crate) fn mixture<'a>(
    parts: impl IntoIterator<Item = (f64, &'a DiscreteMeasure)>,
) -> Result<DiscreteMeasure> {
    let atoms: Vec<(f64, f64)> = parts
        .into_iter()
        .filter(|(c, _)| *c > 0.0)
        .flat_map(|(c, m)| m.atoms().map(move |(p, mass)| (p, c * mass)).collect::<Vec<_>>())
        .collect();
    DiscreteMeasure::from_unsorted(atoms)
}

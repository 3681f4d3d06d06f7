use rand::Rng;

use super::ExchangeableModel;
use crate::error::{Error, Result};
use crate::seed;

/// One run of the model.
#[derive(Debug, Clone, PartialEq)]
pub struct DrawnSequence {
    pub atom_index: usize,
    /// Whether the run fell in the bad class.
    pub bad: bool,
    /// Unperturbed i.i.d. draws from the atom's law.
    pub z: Vec<f64>,
    /// Perturbed, quantised observations.
    pub x: Vec<f64>,
}

/// Fills `z` and `x` for one run and returns `(atom_index, bad)`.
pub(crate) fn fill_run<R: Rng + ?Sized>(
    model: &ExchangeableModel,
    len: usize,
    eps_level: f64,
    rng: &mut R,
    z: &mut Vec<f64>,
    x: &mut Vec<f64>,
) -> (usize, bool) {
    let atom = model.pick_atom(rng);
    let bad = model.bad_mass() > 0.0 && rng.gen::<f64>() < model.bad_mass();
    let spec = model.perturb();
    let outlier_prob = if bad { 1.0 } else { spec.outlier_prob.min(eps_level) };
    let law = &model.atoms()[atom].1;
    z.clear();
    x.clear();
    for _ in 0..len {
        let zj = law.draw(rng);
        let eta = if outlier_prob > 0.0 && rng.gen::<f64>() < outlier_prob {
            if rng.gen::<bool>() {
                spec.outlier_size
            } else {
                -spec.outlier_size
            }
        } else {
            0.0
        };
        z.push(zj);
        x.push(model.quantize(zj + eta));
    }
    (atom, bad)
}

/// A run of length `m` with perturbation level `eps_{eps_index}`, from the
/// stream seeded by `seed`.
pub fn draw_sequence(model: &ExchangeableModel, m: usize, eps_index: usize, seed: u64) -> Result<DrawnSequence> {
    if m == 0 {
        return Err(Error::BadParameter("sequence length must be >= 1".into()));
    }
    let mut rng = seed::rng(seed);
    let (mut z, mut x) = (Vec::with_capacity(m), Vec::with_capacity(m));
    let level = model.perturb().level(eps_index);
    let (atom_index, bad) = fill_run(model, m, level, &mut rng, &mut z, &mut x);
    Ok(DrawnSequence { atom_index, bad, z, x })
}

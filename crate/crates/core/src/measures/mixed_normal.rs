use super::{compensated_sum, Cdf, MASS_TOLERANCE};
use crate::error::{Error, Result};

/// Standard normal distribution function, `0.5 * erfc(-z / sqrt 2)`.
///
/// `libm::erfc` is accurate to a few ulps, so the absolute error here is
/// well below 1e-12 everywhere.
pub fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// The law of `Y^{1/2} Z` with `Z` standard normal independent of a discrete
/// variance `Y`. A variance atom at zero contributes a unit step at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedNormal {
    variance_atoms: Vec<(f64, f64)>,
}

impl MixedNormal {
    pub fn new(variance_atoms: Vec<(f64, f64)>) -> Result<Self> {
        if variance_atoms.is_empty() {
            return Err(Error::InvalidMeasure("mixed normal without components".into()));
        }
        for &(y, w) in &variance_atoms {
            if !(y >= 0.0 && y.is_finite()) {
                return Err(Error::InvalidMeasure(format!("variance {y} is not >= 0")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidMeasure(format!("weight {w} is not positive")));
            }
        }
        let total = compensated_sum(variance_atoms.iter().map(|a| a.1));
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        Ok(MixedNormal { variance_atoms })
    }

    /// `N(0, variance)`.
    pub fn normal(variance: f64) -> Result<Self> {
        MixedNormal::new(vec![(variance, 1.0)])
    }

    pub fn standard() -> Self {
        MixedNormal::normal(1.0).expect("valid")
    }

    pub fn variance_atoms(&self) -> &[(f64, f64)] {
        &self.variance_atoms
    }

    /// `sum_i w_i Phi(t / sqrt(y_i))`.
    pub fn cdf(&self, t: f64) -> f64 {
        self.eval(t, false)
    }

    fn eval(&self, t: f64, left: bool) -> f64 {
        let v = compensated_sum(self.variance_atoms.iter().map(|&(y, w)| {
            let p = if y == 0.0 {
                let stepped = if left { t > 0.0 } else { t >= 0.0 };
                if stepped {
                    1.0
                } else {
                    0.0
                }
            } else {
                standard_normal_cdf(t / y.sqrt())
            };
            w * p
        }));
        v.clamp(0.0, 1.0)
    }
}

impl Cdf for MixedNormal {
    fn cdf(&self, t: f64) -> f64 {
        self.eval(t, false)
    }

    fn cdf_left(&self, t: f64) -> f64 {
        self.eval(t, true)
    }

    fn jumps(&self) -> Vec<f64> {
        if self.variance_atoms.iter().any(|a| a.0 == 0.0) {
            vec![0.0]
        } else {
            Vec::new()
        }
    }

    fn is_step(&self) -> bool {
        self.variance_atoms.iter().all(|a| a.0 == 0.0)
    }
}

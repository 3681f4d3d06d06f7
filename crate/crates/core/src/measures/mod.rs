//! Finite atomic probability measures and the objects built from them.

mod discrete;
mod io;
mod mixed_normal;
mod random;

pub use discrete::{empirical_measure, DiscreteMeasure, EmpiricalSample, Provenance};
pub use io::{measure_from_csv, measure_to_csv, random_measure_from_json, random_measure_to_json};
pub use mixed_normal::{standard_normal_cdf, MixedNormal};
pub use random::RandomMeasure;
pub(crate) use random::mixture;

/// Total-mass tolerance shared by every measure constructor.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A distribution function that can be evaluated on both sides of a jump.
///
/// `jumps` lists every discontinuity; between consecutive jumps the function
/// is continuous. `is_step` is true when the function is constant between
/// jumps (purely atomic law).
pub trait Cdf {
    fn cdf(&self, t: f64) -> f64;
    fn cdf_left(&self, t: f64) -> f64;
    fn jumps(&self) -> Vec<f64>;
    fn is_step(&self) -> bool;
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

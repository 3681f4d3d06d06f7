//! Lacunary trigonometric sums `sum_k f(n_k x)` evaluated in fixed point.
//!
//! A point `x` in `[0, 1)` is held as a `B`-bit binary fraction. Multiplying
//! by an integer and reducing mod 1 is then an exact integer operation, so
//! `n_k x mod 1` stays accurate for frequencies of hundreds or thousands of
//! bits. Angles are handed to `sin` as 64-bit fractions of a turn.

mod experiments;
mod fixed;
mod trig;

pub use experiments::{clt_sample, lil_max_sample, lil_trajectory, CltConfig, LilTrajectory, Normalization, Summand};
pub use fixed::{auto_precision, ceil_log2, frac_mul, FixedPointX, DEFAULT_PRECISION};
pub use trig::{cos_turns, f_sum, sin_turns, trig_sum, FourierFunction, Frequencies};

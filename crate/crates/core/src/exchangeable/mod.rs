//! Conditionally i.i.d. arrays with small perturbations, and the permuted
//! limit checks run on them.
//!
//! A run picks an atom `A` with probability `P(A)`, draws `Z_1, Z_2, ...`
//! i.i.d. from the atom's law `mu_A`, and reports
//! `X_j = quantize(Z_j + eta_j)`, where `eta_j` is `0` or `+-outlier_size`.
//! Outliers occur with probability `min(outlier_prob, eps_m)`, except on
//! the bad class (total probability `bad_mass`), where every term is an
//! outlier.

mod checks;
mod draw;
mod model;

pub use checks::{
    permuted_statistic, proposition_bound_check, strong_law_trajectory, theorem2_check, PropositionCheck,
    Theorem2Report,
};
pub use draw::{draw_sequence, DrawnSequence};
pub use model::{ExchangeableModel, PerturbSpec, DEFAULT_GRID};

//! Distances between probability measures on the line.

mod bounds;
pub mod flow;
mod ks;
mod prohorov;
mod wasserstein;

pub use bounds::{mixture_bound_check, random_measure_bound_check, BoundCheck};
pub use ks::{ks_distance, KS_GRID_HALF_WIDTH, KS_GRID_STEP};
pub use prohorov::{
    deficit, prohorov_distance, prohorov_oracle, strassen_coupling, Coupling, CouplingOutcome,
    ORACLE_MAX_ATOMS,
};
pub use wasserstein::wasserstein2;

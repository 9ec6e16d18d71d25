//! Capacity estimation and the variational endgame: Riesz potentials,
//! lower bounds for cap_s and gamma_{s,+} by ratio ascent over cell weights,
//! a numerical check of the fractional maximum principle, and minimization
//! of the redistribution functional I(a).
//!
//! All radial integrals truncate at the discretization scale h; capacity
//! constraints are evaluated on finite probe sets, so every estimate here is
//! a certified lower bound whose probe-refinement gap is reported.

mod capset;
mod error;
mod mask;
mod maxprinc;
mod potential;
mod ratio;
mod variational;

pub use capset::{cap_s_estimate, gamma_plus_estimate, CapacityEstimate, SolverOptions};
pub use error::CapacityError;
pub use mask::CompactSetMask;
pub use maxprinc::{max_principle_check, MaxPrincipleReport};
pub use potential::{riesz_potential, wolff_potential};
pub use variational::{
    minimize_functional, VariationalConfig, VariationalOutcome, VariationalProblem,
};

//! Wolff energies for discrete measures: the radial-profile energy W_p, its
//! dyadic counterpart over triple-cube lattices, truncated continuous and
//! dyadic pair energies, and the high-density / small / large decomposition.
//!
//! Radial integrals truncate below at the measure resolution h and above at
//! the diameter of the reference cube; atoms diverge below h and the
//! intersected profile is constant above the diameter.

mod decomposition;
mod dyadic;
mod energy;
mod error;

pub use decomposition::{energy_decomposition, hd_sensitivity_scan, EnergyBreakdown};
pub use dyadic::{dyadic_energy, dyadic_wolff_sum};
pub use energy::{continuous_energy, wolff_energy};
pub use error::WolffError;

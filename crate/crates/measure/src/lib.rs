//! Discrete measures with a resolution scale, plus the density machinery on
//! balls and cubes that everything downstream (lattice sums, energies,
//! selection, capacities) builds on.
//!
//! Conventions, fixed here and relied on everywhere:
//!
//! * balls are open (`|x - p| < r`); the one exception is the candidate-radius
//!   evaluation inside [`DiscreteMeasure::maximal_density`], which closes the
//!   ball at each candidate so the supremum over radii is actually attained;
//! * cubes are half-open boxes `[c - l/2, c + l/2)` per coordinate, so a mesh
//!   of equal cubes partitions space exactly;
//! * the resolution `h` is the scale below which the measure is treated as
//!   non-atomic: distinct atoms are at least `h/2` apart, and radial
//!   integrals elsewhere in the workspace truncate at `h` from below.

mod error;
mod geometry;
mod io;
mod measure;
mod params;

pub use error::MeasureError;
pub use geometry::{dist, dist2, linf_dist, Ball, Cube};
pub use io::{load_measure, save_measure};
pub use measure::{weak_l2_quasinorm, DiscreteMeasure};
pub use params::KernelParams;

//! Cube selection machinery: upward domination and the selected family, bunch
//! domination and its refinement, shell choice by doubling scan, the
//! exceptional set of high-potential balls, and small-boundary mesh shifts.
//!
//! Density comparisons run through a [`rieszlab_lattice::TripleMassIndex`] so
//! that the pruned searches and their exhaustive reference oracles evaluate
//! bit-identical masses; only the search strategy differs.

mod bunch;
mod domination;
mod error;
mod exceptional;
mod mesh;
mod params;
mod report;
mod shell;

pub use bunch::{bunch_dominates, select_downward, Certificate, DownwardVerdict};
pub use domination::{dominates_from_above, select_upward, triple_density};
pub use error::SelectionError;
pub use exceptional::exceptional_set;
pub use mesh::{collar_mass, small_boundary_mesh};
pub use params::{Bunch, SelectionParams};
pub use report::{build_report, CubeReport, SelectionReport, ShellReport};
pub use shell::choose_shell;

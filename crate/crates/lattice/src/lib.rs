//! The lattice of concentric triples of dyadic cubes, its family tree and
//! graph metric, and fast per-generation mass aggregation for a discrete
//! measure.
//!
//! A lattice cube is addressed by `(generation, index)`: the underlying
//! dyadic cube at generation `g` has sidelength `base_scale * 2^-g` and
//! occupies `origin + [index * l, (index+1) * l)` per coordinate. The cube
//! itself is the concentric triple (sidelength three times the underlying
//! cube), so same-generation cubes overlap; densities and sidelength ratios
//! always refer to the triple's full sidelength.

mod config;
mod error;
mod graph;
mod mass;
mod window;

pub use config::{LatticeConfig, TripleCube};
pub use error::LatticeError;
pub use graph::{graph_distance, graph_distance_bfs_in_box, log_ratio};
pub use mass::TripleMassIndex;
pub use window::{enumerate_window, write_cubes_csv, AxisBox, LatticeWindow};

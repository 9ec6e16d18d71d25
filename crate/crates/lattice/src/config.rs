use rieszlab_measure::Cube;
use serde::{Deserialize, Serialize};

use crate::LatticeError;

/// Anchors a dyadic lattice in space: generation `g` cells have sidelength
/// `base_scale * 2^-g` and are laid out from `origin`. Shifted lattices are
/// just configs with a different origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub base_scale: f64,
    pub origin: Vec<f64>,
}

impl LatticeConfig {
    pub fn new(base_scale: f64, origin: Vec<f64>) -> Result<Self, LatticeError> {
        if !(base_scale > 0.0) || !base_scale.is_finite() {
            return Err(LatticeError::InvalidConfig(format!(
                "base scale must be positive and finite, got {base_scale}"
            )));
        }
        if origin.iter().any(|v| !v.is_finite()) {
            return Err(LatticeError::InvalidConfig(
                "origin coordinates must be finite".into(),
            ));
        }
        Ok(LatticeConfig { base_scale, origin })
    }

    /// Standard lattice over the unit cube `[0,1)^d`.
    pub fn unit(d: usize) -> Self {
        LatticeConfig {
            base_scale: 1.0,
            origin: vec![0.0; d],
        }
    }

    /// Config whose base triple (generation 0, index 0) is exactly `r`: the
    /// canonical dilation-plus-translation sending the reference triple to a
    /// given cube just re-anchors the lattice.
    pub fn anchored(r: &Cube) -> Self {
        let base = r.side / 3.0;
        let origin = r.center.iter().map(|c| c - base / 2.0).collect();
        LatticeConfig {
            base_scale: base,
            origin,
        }
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    /// Sidelength of the underlying dyadic cell at `generation`.
    pub fn cell_side(&self, generation: i32) -> f64 {
        self.base_scale * 2.0f64.powi(-generation)
    }

    /// Cell index of the point at `generation` (half-open cells).
    pub fn cell_of(&self, generation: i32, x: &[f64]) -> Vec<i64> {
        let l = self.cell_side(generation);
        x.iter()
            .zip(&self.origin)
            .map(|(v, o)| ((v - o) / l).floor() as i64)
            .collect()
    }
}

/// A lattice cube: the concentric triple of the underlying dyadic cell at
/// `(generation, index)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TripleCube {
    pub generation: i32,
    pub index: Vec<i64>,
}

impl TripleCube {
    pub fn new(generation: i32, index: Vec<i64>) -> Self {
        TripleCube { generation, index }
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    /// Center shared by the underlying cell and the triple.
    pub fn center(&self, config: &LatticeConfig) -> Vec<f64> {
        let l = config.cell_side(self.generation);
        self.index
            .iter()
            .zip(&config.origin)
            .map(|(i, o)| o + (*i as f64 + 0.5) * l)
            .collect()
    }

    /// Full sidelength of the triple; densities and sidelength ratios use
    /// this, not the underlying cell.
    pub fn side(&self, config: &LatticeConfig) -> f64 {
        3.0 * config.cell_side(self.generation)
    }

    /// The triple as a geometric cube.
    pub fn geometric_cube(&self, config: &LatticeConfig) -> Cube {
        Cube::new(self.center(config), self.side(config))
    }

    /// The underlying dyadic cell as a geometric cube.
    pub fn underlying_cube(&self, config: &LatticeConfig) -> Cube {
        Cube::new(self.center(config), config.cell_side(self.generation))
    }

    /// Ancestor two generations up (underlying sidelength 4x). It contains
    /// the concentric triple of this cube, hence any cube of comparable
    /// sidelength that meets it.
    pub fn grandparent(&self) -> TripleCube {
        TripleCube {
            generation: self.generation - 2,
            index: self.index.iter().map(|i| i.div_euclid(4)).collect(),
        }
    }

    pub fn parent(&self) -> TripleCube {
        TripleCube {
            generation: self.generation - 1,
            index: self.index.iter().map(|i| i.div_euclid(2)).collect(),
        }
    }
}

use rieszlab_measure::linf_dist;

use crate::CapacityError;

/// A compact set rendered as a union of pairwise disjoint cells of one
/// common sidelength. Cells are closed cubes around their centers.
#[derive(Clone, Debug)]
pub struct CompactSetMask {
    dim: usize,
    centers: Vec<f64>,
    side: f64,
}

impl CompactSetMask {
    pub fn new(dim: usize, centers: Vec<f64>, side: f64) -> Result<Self, CapacityError> {
        if dim == 0 {
            return Err(CapacityError::InvalidParams(
                "mask dimension must be positive".into(),
            ));
        }
        if !(side > 0.0) || !side.is_finite() {
            return Err(CapacityError::InvalidParams(format!(
                "cell side must be a positive real, got {side}"
            )));
        }
        if centers.len() % dim != 0 {
            return Err(CapacityError::InvalidParams(format!(
                "center list length {} is not a multiple of the dimension {dim}",
                centers.len()
            )));
        }
        if centers.iter().any(|c| !c.is_finite()) {
            return Err(CapacityError::InvalidParams(
                "cell centers must be finite".into(),
            ));
        }
        let mask = CompactSetMask { dim, centers, side };
        for i in 0..mask.len() {
            for j in (i + 1)..mask.len() {
                // Closed cells of side s are disjoint (up to shared faces)
                // iff their centers are at sup-distance >= s.
                if linf_dist(mask.center(i), mask.center(j)) < side * (1.0 - 1e-12) {
                    return Err(CapacityError::InvalidParams(format!(
                        "cells {i} and {j} overlap"
                    )));
                }
            }
        }
        Ok(mask)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.centers.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn center(&self, i: usize) -> &[f64] {
        &self.centers[i * self.dim..(i + 1) * self.dim]
    }

    /// Exact diameter of the union of closed cells: the largest
    /// corner-to-corner distance over cell pairs.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.len() {
            for j in i..self.len() {
                let mut acc = 0.0;
                for t in 0..self.dim {
                    let gap = (self.center(i)[t] - self.center(j)[t]).abs() + self.side;
                    acc += gap * gap;
                }
                best = best.max(acc);
            }
        }
        best.sqrt()
    }

    /// Mask scaled about the origin: centers and side both multiply.
    pub fn scaled(&self, lambda: f64) -> Result<Self, CapacityError> {
        CompactSetMask::new(
            self.dim,
            self.centers.iter().map(|c| c * lambda).collect(),
            self.side * lambda,
        )
    }
}

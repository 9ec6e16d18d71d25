use rieszlab_lattice::{LatticeConfig, TripleCube};
use rieszlab_measure::KernelParams;

use crate::SelectionError;

/// The proof parameters (a, B, eps). Both scale factors are powers of two so
/// concentric enlargements land on exact floating-point values; the standing
/// regime ties them together.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelectionParams {
    pub a: f64,
    pub b: f64,
    pub eps: f64,
}

fn is_power_of_two(x: f64) -> bool {
    if !(x > 0.0) || !x.is_finite() {
        return false;
    }
    let e = x.log2();
    e == e.round() && x == 2f64.powi(e as i32)
}

impl SelectionParams {
    pub fn new(a: f64, b: f64, eps: f64) -> Result<Self, SelectionError> {
        if !is_power_of_two(a) || !(a < 1.0) {
            return Err(SelectionError::InvalidParams(format!(
                "a must be a power of two in (0,1), got {a}"
            )));
        }
        if !is_power_of_two(b) || !(b > 1.0) {
            return Err(SelectionError::InvalidParams(format!(
                "B must be a power of two above 1, got {b}"
            )));
        }
        if !(eps > 0.0) || eps * b.log2() > 1.0 + 1e-12 {
            return Err(SelectionError::InvalidParams(format!(
                "eps must be positive with B^eps <= 2, got eps = {eps}, B = {b}"
            )));
        }
        if !(a * a * b > 1.0) {
            return Err(SelectionError::InvalidParams(format!(
                "the regime needs a^-2 < B, got a = {a}, B = {b}"
            )));
        }
        Ok(SelectionParams { a, b, eps })
    }

    /// The shell-scan step lambda = 1/(s log2 B).
    pub fn lambda(&self, k: &KernelParams) -> f64 {
        1.0 / (k.s * self.b.log2())
    }
}

/// A candidate family for domination from below. The B-enlargements of the
/// members must be pairwise disjoint.
#[derive(Clone, Debug)]
pub struct Bunch {
    cubes: Vec<TripleCube>,
}

impl Bunch {
    pub fn new(
        config: &LatticeConfig,
        params: &SelectionParams,
        cubes: Vec<TripleCube>,
    ) -> Result<Self, SelectionError> {
        let enlarged: Vec<_> = cubes
            .iter()
            .map(|q| q.geometric_cube(config).scaled(params.b))
            .collect();
        for (i, a) in enlarged.iter().enumerate() {
            for b in &enlarged[i + 1..] {
                if a.intersects(b) {
                    return Err(SelectionError::OverlappingBunch);
                }
            }
        }
        Ok(Bunch { cubes })
    }

    pub fn cubes(&self) -> &[TripleCube] {
        &self.cubes
    }
}

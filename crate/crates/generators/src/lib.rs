//! Reference measure families for experiments: four-corner Cantor iterates,
//! uniform grids, segments, and seeded random blob clusters. Every generator
//! is deterministic: the same arguments (and seed) reproduce the measure
//! bitwise.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rieszlab_measure::{DiscreteMeasure, MeasureError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// The n-th four-corner Cantor iterate on the unit square with contraction
/// ratio rho: 4^n atoms of weight 4^{-n} at the centers of the generation-n
/// construction cells, resolution h = rho^n.
pub fn cantor4(rho: f64, n: u32) -> Result<DiscreteMeasure, GeneratorError> {
    if !(rho > 0.0 && rho < 0.5) {
        return Err(GeneratorError::InvalidParams(format!(
            "contraction ratio must lie in (0, 1/2), got {rho}"
        )));
    }
    if n > 10 {
        return Err(GeneratorError::InvalidParams(format!(
            "generation {n} would produce {} atoms",
            4f64.powi(n as i32)
        )));
    }
    // Lower-left corners of the construction cells, refined level by level.
    let mut corners = vec![(0.0f64, 0.0f64)];
    let mut side = 1.0;
    for _ in 0..n {
        let child = side * rho;
        let far = side - child;
        let mut next = Vec::with_capacity(corners.len() * 4);
        for &(x, y) in &corners {
            for dx in [0.0, far] {
                for dy in [0.0, far] {
                    next.push((x + dx, y + dy));
                }
            }
        }
        corners = next;
        side = child;
    }
    let w = 0.25f64.powi(n as i32);
    let mut points = Vec::with_capacity(corners.len() * 2);
    for &(x, y) in &corners {
        points.push(x + side / 2.0);
        points.push(y + side / 2.0);
    }
    let weights = vec![w; corners.len()];
    Ok(DiscreteMeasure::new(2, points, weights, side)?)
}

/// Uniform probability measure on the unit cube: n^d atoms of weight n^{-d}
/// at cell centers, resolution 1/n.
pub fn uniform_cube(d: usize, n: usize) -> Result<DiscreteMeasure, GeneratorError> {
    if d == 0 || n == 0 {
        return Err(GeneratorError::InvalidParams(
            "dimension and per-axis count must be positive".into(),
        ));
    }
    let count = n.checked_pow(d as u32).filter(|&c| c <= 1 << 24).ok_or_else(|| {
        GeneratorError::InvalidParams(format!("{n}^{d} atoms exceed the generator cap"))
    })?;
    let h = 1.0 / n as f64;
    let mut points = Vec::with_capacity(count * d);
    let mut idx = vec![0usize; d];
    'grid: loop {
        for &i in &idx {
            points.push((i as f64 + 0.5) * h);
        }
        for j in (0..d).rev() {
            idx[j] += 1;
            if idx[j] < n {
                continue 'grid;
            }
            idx[j] = 0;
        }
        break;
    }
    let w = 1.0 / count as f64;
    Ok(DiscreteMeasure::new(d, points, vec![w; count], h)?)
}

/// Length measure on the unit segment [0,1] x {0} in the plane: 1/h equally
/// spaced atoms of weight h. h must divide 1.
pub fn segment(h: f64) -> Result<DiscreteMeasure, GeneratorError> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(GeneratorError::InvalidParams(format!(
            "segment spacing must lie in (0, 1], got {h}"
        )));
    }
    let count_f = 1.0 / h;
    let count = count_f.round() as usize;
    if count == 0 || (count_f - count as f64).abs() > 1e-9 * count_f {
        return Err(GeneratorError::InvalidParams(format!(
            "segment spacing {h} does not divide the unit length"
        )));
    }
    let mut points = Vec::with_capacity(count * 2);
    for i in 0..count {
        points.push((i as f64 + 0.5) * h);
        points.push(0.0);
    }
    Ok(DiscreteMeasure::new(2, points, vec![h; count], h)?)
}

/// Seeded Gaussian blob clusters in the unit square, snapped to a fixed grid
/// so coincident samples merge and the separation invariant holds exactly.
pub fn random_blobs(seed: u64, clusters: usize) -> Result<DiscreteMeasure, GeneratorError> {
    if clusters == 0 || clusters > 64 {
        return Err(GeneratorError::InvalidParams(format!(
            "cluster count must lie in 1..=64, got {clusters}"
        )));
    }
    const SAMPLES_PER_CLUSTER: usize = 60;
    const GRID: f64 = 1.0 / 256.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample_w = 1.0 / (clusters * SAMPLES_PER_CLUSTER) as f64;
    let mut cells: BTreeMap<(i64, i64), f64> = BTreeMap::new();
    for _ in 0..clusters {
        let cx: f64 = rng.gen_range(0.15..0.85);
        let cy: f64 = rng.gen_range(0.15..0.85);
        let spread: f64 = rng.gen_range(0.02..0.10);
        for _ in 0..SAMPLES_PER_CLUSTER {
            // Box-Muller pair; clamp to the unit square.
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = (-2.0 * u1.ln()).sqrt() * spread;
            let x = (cx + r * u2.cos()).clamp(0.0, 1.0 - GRID);
            let y = (cy + r * u2.sin()).clamp(0.0, 1.0 - GRID);
            let key = ((x / GRID).floor() as i64, (y / GRID).floor() as i64);
            *cells.entry(key).or_insert(0.0) += sample_w;
        }
    }
    let mut points = Vec::with_capacity(cells.len() * 2);
    let mut weights = Vec::with_capacity(cells.len());
    for ((i, j), w) in cells {
        points.push((i as f64 + 0.5) * GRID);
        points.push((j as f64 + 0.5) * GRID);
        weights.push(w);
    }
    Ok(DiscreteMeasure::new(2, points, weights, GRID)?)
}

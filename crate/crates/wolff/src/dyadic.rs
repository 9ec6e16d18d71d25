use rieszlab_lattice::{LatticeConfig, LatticeWindow, TripleMassIndex};
use rieszlab_measure::{Cube, DiscreteMeasure, KernelParams};

use crate::WolffError;

fn check_coverage(mu: &DiscreteMeasure, window: &LatticeWindow) -> Result<(), WolffError> {
    for i in 0..mu.len() {
        if !window.bbox.contains_point(mu.point(i)) {
            return Err(WolffError::WindowCoverage(format!(
                "atom {i} lies outside the window box"
            )));
        }
    }
    Ok(())
}

fn check_resolution(
    config: &LatticeConfig,
    mu: &DiscreteMeasure,
    window: &LatticeWindow,
) -> Result<(), WolffError> {
    let finest = config.cell_side(window.g_max);
    if finest > mu.resolution() {
        return Err(WolffError::WindowCoverage(format!(
            "window cells stop at side {finest} but the measure resolves to {}; \
             extend the fine generations",
            mu.resolution()
        )));
    }
    Ok(())
}

/// The dyadic Wolff sum over a window: sum of D(Q)^2 mu(Q) over all
/// positive-mass triple cubes of the window's generations. The window must
/// cover the support and resolve down to the measure resolution; deeper
/// windows weight finer scales more.
pub fn dyadic_wolff_sum(
    k: &KernelParams,
    config: &LatticeConfig,
    mu: &DiscreteMeasure,
    window: &LatticeWindow,
) -> Result<f64, WolffError> {
    check_coverage(mu, window)?;
    check_resolution(config, mu, window)?;
    let index = TripleMassIndex::build(mu, config, window.g_min, window.g_max)?;
    let mut sum = 0.0;
    for g in window.g_min..=window.g_max {
        let side = 3.0 * config.cell_side(g);
        for q in index.positive_triples(g)? {
            let mass = index.triple_mass(&q)?;
            let density = mass / side.powf(k.s);
            sum += density * density * mass;
        }
    }
    Ok(sum)
}

/// The truncated dyadic energy of a region P: the sum over window cubes Q'
/// with side at most r of side(Q') D(Q') mu(Q' cap P). Accumulated atom by
/// atom: each atom of P contributes its weight to the 3^d triples containing
/// it at each admissible generation.
pub fn dyadic_energy(
    k: &KernelParams,
    config: &LatticeConfig,
    mu: &DiscreteMeasure,
    p_cube: &Cube,
    r: f64,
    window: &LatticeWindow,
) -> Result<f64, WolffError> {
    check_resolution(config, mu, window)?;
    let index = TripleMassIndex::build(mu, config, window.g_min, window.g_max)?;
    let inside: Vec<usize> = (0..mu.len())
        .filter(|&i| p_cube.contains(mu.point(i)))
        .collect();
    let d = config.dim();

    let mut sum = 0.0;
    for g in window.g_min..=window.g_max {
        let side = 3.0 * config.cell_side(g);
        if side > r {
            continue;
        }
        for &i in &inside {
            let cell = config.cell_of(g, mu.point(i));
            sum += mu.weight(i) * containing_triples_weight(k, &index, g, &cell, side, d)?;
        }
    }
    Ok(sum)
}

/// Sum of side * D(Q') over the 3^d triples at one generation containing a
/// cell, in fixed lexicographic offset order.
fn containing_triples_weight(
    k: &KernelParams,
    index: &TripleMassIndex,
    g: i32,
    cell: &[i64],
    side: f64,
    d: usize,
) -> Result<f64, WolffError> {
    let mut acc = 0.0;
    let mut offset = vec![-1i64; d];
    loop {
        let center: Vec<i64> = cell.iter().zip(&offset).map(|(c, o)| c + o).collect();
        let mass = index.triple_mass(&rieszlab_lattice::TripleCube::new(g, center))?;
        acc += side * (mass / side.powf(k.s));
        let mut axis = 0;
        loop {
            if axis == d {
                return Ok(acc);
            }
            offset[axis] += 1;
            if offset[axis] <= 1 {
                break;
            }
            offset[axis] = -1;
            axis += 1;
        }
    }
}

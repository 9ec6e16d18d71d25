use rieszlab_lattice::{log_ratio, LatticeWindow, TripleCube, TripleMassIndex};
use rieszlab_measure::{DiscreteMeasure, KernelParams};

use crate::{SelectionError, SelectionParams};

/// Density of a triple cube: mass over sidelength to the power s, read from
/// the shared index so every caller sees the same floating-point value.
pub fn triple_density(
    k: &KernelParams,
    index: &TripleMassIndex,
    q: &TripleCube,
) -> Result<f64, SelectionError> {
    let mass = index.triple_mass(q)?;
    Ok(mass / q.side(index.config()).powf(k.s))
}

/// Does Q' dominate Q from above? Requires the geometric containment
/// aBQ' >= BQ together with the density gain 2^(eps [Q':Q]) D(Q) <= D(Q').
///
/// Two zero-density cubes in the right position dominate each other's letter:
/// 0 >= 0. Callers that only care about positive-mass cubes filter first.
pub fn dominates_from_above(
    k: &KernelParams,
    params: &SelectionParams,
    index: &TripleMassIndex,
    q_prime: &TripleCube,
    q: &TripleCube,
) -> Result<bool, SelectionError> {
    let config = index.config();
    let outer = q_prime.geometric_cube(config).scaled(params.a * params.b);
    let inner = q.geometric_cube(config).scaled(params.b);
    if !outer.contains_cube(&inner) {
        return Ok(false);
    }
    let gap = log_ratio(q_prime, q);
    let d_prime = triple_density(k, index, q_prime)?;
    let d_q = triple_density(k, index, q)?;
    Ok(d_prime >= 2f64.powf(params.eps * gap as f64) * d_q)
}

/// Run the upward selection over one lattice window: keep every positive-mass
/// triple cube that no other positive cube inside the window dominates from
/// above. The window is the universe; cubes outside it do not compete.
///
/// The bounding box must cover the support with a margin of B times the
/// window's largest cube side, so the B-enlargement of every candidate is
/// honestly inside the declared region; otherwise we refuse to run.
pub fn select_upward(
    k: &KernelParams,
    mu: &DiscreteMeasure,
    index: &TripleMassIndex,
    window: &LatticeWindow,
    params: &SelectionParams,
) -> Result<Vec<TripleCube>, SelectionError> {
    let config = index.config();
    if !index.generations().contains(&window.g_min) || !index.generations().contains(&window.g_max)
    {
        return Err(SelectionError::InvalidParams(format!(
            "the mass index covers generations {:?} but the window asks for {}..={}",
            index.generations(),
            window.g_min,
            window.g_max
        )));
    }

    // Positive cubes per generation, with mass and density pinned once.
    let mut positive: Vec<(TripleCube, f64, f64)> = Vec::new();
    for g in window.g_min..=window.g_max {
        for q in index.positive_triples(g)? {
            let mass = index.triple_mass(&q)?;
            let density = mass / q.side(config).powf(k.s);
            positive.push((q, mass, density));
        }
    }
    if positive.is_empty() {
        return Ok(Vec::new());
    }

    let total = mu.total_mass();
    let top_side = 3.0 * config.cell_side(window.g_min);

    // Spatial margin: every candidate's B-enlargement must fit inside the
    // declared box. Candidates are positive, so their centers sit within one
    // sidelength of the support and a margin of B top_side covers them.
    let margin = params.b * top_side;
    if let Some((lo, hi)) = mu.bounding_box() {
        let ok = (0..config.dim()).all(|j| {
            window.bbox.lo[j] <= lo[j] - margin && window.bbox.hi[j] >= hi[j] + margin
        });
        if !ok {
            return Err(SelectionError::WindowMargin(format!(
                "the window box must extend {margin:.6} beyond the support on every axis"
            )));
        }
    }

    let sup_density = positive
        .iter()
        .map(|(_, _, d)| *d)
        .fold(f64::NEG_INFINITY, f64::max);

    // Index positives by generation for the candidate scan.
    let g_lo = window.g_min;
    let mut by_gen: Vec<Vec<usize>> = vec![Vec::new(); (window.g_max - g_lo + 1) as usize];
    for (i, (q, _, _)) in positive.iter().enumerate() {
        by_gen[(q.generation - g_lo) as usize].push(i);
    }

    let mut selected = Vec::new();
    'cubes: for (q, mass, d_q) in &positive {
        // A dominator is strictly coarser; its generation gap is capped both
        // by the density ceiling and by the total-mass ceiling.
        // Small slack so a dominator sitting exactly on either ceiling is
        // never pruned; extra candidates only cost the exact check below.
        let gap_density = (sup_density / d_q).log2() / params.eps;
        let gap_mass = (total / mass).log2() / (k.s + params.eps);
        let gap_max = (gap_density.min(gap_mass) + 1e-9).floor() as i64;
        for gap in 1..=gap_max.max(0) {
            let g_prime = q.generation - gap as i32;
            if g_prime < g_lo {
                break;
            }
            let side_prime = 3.0 * config.cell_side(g_prime);
            // Centers further apart than this cannot satisfy the containment.
            let limit =
                (params.a * params.b * side_prime - params.b * q.side(config)) / 2.0;
            if limit < 0.0 {
                continue;
            }
            let center_q = q.center(config);
            for &i in &by_gen[(g_prime - g_lo) as usize] {
                let (cand, _, _) = &positive[i];
                let center_c = cand.center(config);
                let off = (0..config.dim())
                    .map(|j| (center_c[j] - center_q[j]).abs())
                    .fold(0f64, f64::max);
                if off > limit + 1e-9 * side_prime {
                    continue;
                }
                if dominates_from_above(k, params, index, cand, q)? {
                    continue 'cubes;
                }
            }
        }
        selected.push(q.clone());
    }
    Ok(selected)
}

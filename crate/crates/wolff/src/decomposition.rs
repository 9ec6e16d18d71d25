use std::collections::BTreeSet;

use rieszlab_lattice::{AxisBox, LatticeConfig, LatticeWindow, TripleCube, TripleMassIndex};
use rieszlab_measure::{DiscreteMeasure, KernelParams};
use rieszlab_selection::{select_upward, SelectionParams};

use crate::WolffError;

/// The three truncated energies of the decomposition around a cube, with
/// per-generation series. Each series sums to its total up to roundoff.
#[derive(Clone, Debug)]
pub struct EnergyBreakdown {
    pub e_hd: f64,
    pub e_small: f64,
    pub e_large: f64,
    pub hd_series: Vec<(i32, f64)>,
    pub small_series: Vec<(i32, f64)>,
    pub large_series: Vec<(i32, f64)>,
}

/// Split the truncated dyadic energy of R = (B/2)Q into the three classes
/// and sum each at truncation level m:
///
/// * high density: cubes meeting R with D(Q') > (c3/a^s) 2^(eps [Q:Q']) D(Q),
///   summed over sides at most 2^-m side(Q);
/// * small: all cubes with side at most 2^-m/a side(Q);
/// * large: upward-selected cubes with side between (1/a) side(Q) and
///   2^-m side(R).
///
/// Every sum runs down to the lattice scale of the measure resolution. The
/// cube need not be selected itself; the decomposition is well defined for
/// any positive-mass cube and the large class carries its own selection over
/// the same scales.
pub fn energy_decomposition(
    k: &KernelParams,
    config: &LatticeConfig,
    mu: &DiscreteMeasure,
    q: &TripleCube,
    params: &SelectionParams,
    m: u32,
    c3: f64,
) -> Result<EnergyBreakdown, WolffError> {
    if !(c3 > 0.0) || !c3.is_finite() {
        return Err(WolffError::InvalidParams(format!(
            "high-density threshold constant must be positive, got {c3}"
        )));
    }
    let d = config.dim();
    if mu.dim() != d || q.dim() != d {
        return Err(WolffError::InvalidParams(
            "measure, lattice, and cube dimensions must agree".into(),
        ));
    }
    let g = q.generation;
    let m_i = m as i32;
    let k_a = (-params.a.log2()).round() as i32;
    let k_b2 = (params.b / 2.0).log2().round() as i32;

    // Finest generation whose triples are no smaller than the resolution.
    let g_bot = (3.0 * config.base_scale / mu.resolution()).log2().floor() as i32;

    let g_hd_top = g + m_i;
    let g_small_top = g + m_i - k_a;
    let g_large_top = g + m_i - k_b2;
    let g_large_bot = g - k_a;

    let range_lo = g_hd_top.min(g_small_top).min(g_large_top).min(g);
    let range_hi = g_bot.max(g);
    let index = TripleMassIndex::build(mu, config, range_lo, range_hi)?;

    let side_q = q.side(config);
    let d_q = index.triple_mass(q)? / side_q.powf(k.s);
    let r_cube = q.geometric_cube(config).scaled(params.b / 2.0);
    let in_r: Vec<usize> = (0..mu.len())
        .filter(|&i| r_cube.contains(mu.point(i)))
        .collect();

    let mut breakdown = EnergyBreakdown {
        e_hd: 0.0,
        e_small: 0.0,
        e_large: 0.0,
        hd_series: Vec::new(),
        small_series: Vec::new(),
        large_series: Vec::new(),
    };

    // High density class.
    for g_prime in g_hd_top..=g_bot {
        let bar = (c3 / params.a.powf(k.s)) * 2f64.powf(params.eps * (g_prime - g) as f64) * d_q;
        let mut layer = 0.0;
        for_each_contribution(k, config, &index, &in_r, mu, g_prime, |density, term| {
            if density > bar {
                layer += term;
                breakdown.e_hd += term;
            }
        })?;
        breakdown.hd_series.push((g_prime, layer));
    }

    // Small class: side condition only.
    for g_prime in g_small_top..=g_bot {
        let mut layer = 0.0;
        for_each_contribution(k, config, &index, &in_r, mu, g_prime, |_, term| {
            layer += term;
            breakdown.e_small += term;
        })?;
        breakdown.small_series.push((g_prime, layer));
    }

    // Large class: selected cubes only, between (1/a) side(Q) and
    // 2^-m side(R).
    if g_large_top <= g_large_bot && g_large_top <= g_bot {
        let selected = selected_family(k, config, mu, &index, g_large_top, g_bot, params)?;
        for g_prime in g_large_top..=g_large_bot.min(g_bot) {
            let mut layer = 0.0;
            for_each_selected_contribution(
                k,
                config,
                &index,
                &selected,
                &in_r,
                mu,
                g_prime,
                |term| {
                    layer += term;
                    breakdown.e_large += term;
                },
            )?;
            breakdown.large_series.push((g_prime, layer));
        }
    }
    Ok(breakdown)
}

/// e_hd as a function of the threshold constant, for sensitivity scans.
pub fn hd_sensitivity_scan(
    k: &KernelParams,
    config: &LatticeConfig,
    mu: &DiscreteMeasure,
    q: &TripleCube,
    params: &SelectionParams,
    m: u32,
    c3_values: &[f64],
) -> Result<Vec<(f64, f64)>, WolffError> {
    c3_values
        .iter()
        .map(|&c3| Ok((c3, energy_decomposition(k, config, mu, q, params, m, c3)?.e_hd)))
        .collect()
}

/// Visit, for every atom of R and each of the 3^d triples containing it at
/// one generation, the triple's density and its term side * D * weight.
fn for_each_contribution(
    k: &KernelParams,
    config: &LatticeConfig,
    index: &TripleMassIndex,
    in_r: &[usize],
    mu: &DiscreteMeasure,
    g: i32,
    mut visit: impl FnMut(f64, f64),
) -> Result<(), WolffError> {
    let d = config.dim();
    let side = 3.0 * config.cell_side(g);
    for &i in in_r {
        let cell = config.cell_of(g, mu.point(i));
        let mut offset = vec![-1i64; d];
        'offsets: loop {
            let center: Vec<i64> = cell.iter().zip(&offset).map(|(c, o)| c + o).collect();
            let mass = index.triple_mass(&TripleCube::new(g, center))?;
            if mass > 0.0 {
                let density = mass / side.powf(k.s);
                visit(density, mu.weight(i) * side * density);
            }
            let mut axis = 0;
            loop {
                if axis == d {
                    break 'offsets;
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
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn for_each_selected_contribution(
    k: &KernelParams,
    config: &LatticeConfig,
    index: &TripleMassIndex,
    selected: &BTreeSet<TripleCube>,
    in_r: &[usize],
    mu: &DiscreteMeasure,
    g: i32,
    mut visit: impl FnMut(f64),
) -> Result<(), WolffError> {
    let d = config.dim();
    let side = 3.0 * config.cell_side(g);
    for &i in in_r {
        let cell = config.cell_of(g, mu.point(i));
        let mut offset = vec![-1i64; d];
        'offsets: loop {
            let center: Vec<i64> = cell.iter().zip(&offset).map(|(c, o)| c + o).collect();
            let triple = TripleCube::new(g, center);
            if selected.contains(&triple) {
                let mass = index.triple_mass(&triple)?;
                let density = mass / side.powf(k.s);
                visit(mu.weight(i) * side * density);
            }
            let mut axis = 0;
            loop {
                if axis == d {
                    break 'offsets;
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
    Ok(())
}

fn selected_family(
    k: &KernelParams,
    config: &LatticeConfig,
    mu: &DiscreteMeasure,
    index: &TripleMassIndex,
    g_min: i32,
    g_max: i32,
    params: &SelectionParams,
) -> Result<BTreeSet<TripleCube>, WolffError> {
    let Some((lo, hi)) = mu.bounding_box() else {
        return Ok(BTreeSet::new());
    };
    let margin = params.b * 3.0 * config.cell_side(g_min);
    let bbox = AxisBox::new(
        lo.iter().map(|v| v - margin).collect(),
        hi.iter().map(|v| v + margin).collect(),
    )?;
    let window = LatticeWindow::new(bbox, g_min, g_max)?;
    Ok(select_upward(k, mu, index, &window, params)?
        .into_iter()
        .collect())
}

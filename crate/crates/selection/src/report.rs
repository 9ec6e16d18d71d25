use serde::Serialize;

use rieszlab_lattice::{LatticeConfig, LatticeWindow, TripleMassIndex};
use rieszlab_measure::{DiscreteMeasure, KernelParams};

use crate::{
    choose_shell, select_downward, select_upward, Certificate, SelectionError, SelectionParams,
};

#[derive(Clone, Debug, Serialize)]
pub struct ShellReport {
    pub center: Vec<f64>,
    pub side: f64,
    pub mass: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CubeReport {
    pub generation: i32,
    pub index: Vec<i64>,
    pub mass: f64,
    pub density: f64,
    pub selected_upward: bool,
    /// For upward-selected cubes: whether the cube also survives the
    /// downward refinement (no bunch of its peers dominates it).
    pub selected_downward: Option<bool>,
    /// "exhaustive" or "greedy", present with `selected_downward`.
    pub certificate: Option<String>,
    pub shell: Option<ShellReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelectionReport {
    pub cube_count: usize,
    pub selected_upward: usize,
    pub selected_downward: usize,
    /// Share of the Wolff mass D(Q)^2 mu(BQ) carried by the selected family,
    /// over all positive cubes of the window. 1.0 when the window is empty.
    pub wolff_retention: f64,
    pub cubes: Vec<CubeReport>,
}

/// Run the full selection pipeline over one window and collect everything a
/// consumer needs to audit it: per-cube masses and densities, both selection
/// verdicts, shells with their masses, and the retention ratio.
pub fn build_report(
    k: &KernelParams,
    config: &LatticeConfig,
    mu: &DiscreteMeasure,
    window: &LatticeWindow,
    params: &SelectionParams,
) -> Result<SelectionReport, SelectionError> {
    let index = TripleMassIndex::build(mu, config, window.g_min, window.g_max)?;
    let upward = select_upward(k, mu, &index, window, params)?;
    let verdicts = select_downward(k, mu, &index, &upward, params)?;

    let mut rows = Vec::new();
    let mut num = 0.0;
    let mut den = 0.0;
    for g in window.g_min..=window.g_max {
        for q in index.positive_triples(g)? {
            let mass = index.triple_mass(&q)?;
            let side = q.side(config);
            let density = mass / side.powf(k.s);
            let wolff = density * density * mu.cube_mass(&q.geometric_cube(config).scaled(params.b));
            den += wolff;

            let verdict = verdicts.iter().find(|v| v.cube == q);
            let selected_upward = verdict.is_some();
            if selected_upward {
                num += wolff;
            }
            let shell = if selected_upward {
                let cube = choose_shell(k, config, mu, &q, params)?;
                let mass = mu.cube_mass_closed(&cube);
                Some(ShellReport { center: cube.center, side: cube.side, mass })
            } else {
                None
            };
            rows.push(CubeReport {
                generation: q.generation,
                index: q.index.clone(),
                mass,
                density,
                selected_upward,
                selected_downward: verdict.map(|v| !v.dominated),
                certificate: verdict.map(|v| {
                    match v.certificate {
                        Certificate::Exhaustive => "exhaustive",
                        Certificate::Greedy => "greedy",
                    }
                    .to_string()
                }),
                shell,
            });
        }
    }
    Ok(SelectionReport {
        cube_count: rows.len(),
        selected_upward: upward.len(),
        selected_downward: verdicts.iter().filter(|v| !v.dominated).count(),
        wolff_retention: if den > 0.0 { num / den } else { 1.0 },
        cubes: rows,
    })
}

use rieszlab_lattice::{LatticeConfig, TripleCube};
use rieszlab_measure::{Cube, DiscreteMeasure, KernelParams};

use crate::{SelectionError, SelectionParams};

/// Pick the doubling shell of a cube. Starting from Q0 = 2aBQ, sweep the
/// concentric cubes Q^(j) = (1 + j lambda) Q0 with lambda = 1/(s log2 B) and
/// stop at the least j <= 1/lambda whose predecessor holds at least half its
/// mass; the shell is the closure of the cube halfway between the two.
///
/// All masses here and in every consumer are closed-cube masses, so the
/// returned cube stands for its closure. The guarantee that makes the shell
/// useful: mu((1 - lambda/8) Qhat) >= mu((1 + lambda/8) Qhat) / 2, because
/// both of those cubes are sandwiched between Q^(j-1) and Q^(j).
///
/// If every j fails, the mass more than doubles on each step of the sweep,
/// which no measure in the standing regime does; the error reports the
/// total growth factor across the sweep.
pub fn choose_shell(
    k: &KernelParams,
    config: &LatticeConfig,
    mu: &DiscreteMeasure,
    q: &TripleCube,
    params: &SelectionParams,
) -> Result<Cube, SelectionError> {
    let geo = q.geometric_cube(config);
    let q0 = geo.scaled(2.0 * params.a * params.b);
    let outer = geo.scaled(4.0 * params.a * params.b);
    if !(mu.cube_mass_closed(&outer) > 0.0) {
        return Err(SelectionError::InvalidParams(format!(
            "the shell sweep needs mass inside 4aBQ (cube at generation {})",
            q.generation
        )));
    }
    let lambda = params.lambda(k);
    let j_max = (1.0 / lambda + 1e-9).floor() as u32;
    let mut m_prev = mu.cube_mass_closed(&q0);
    for j in 1..=j_max {
        let m_j = mu.cube_mass_closed(&q0.scaled(1.0 + j as f64 * lambda));
        if m_prev >= 0.5 * m_j {
            return Ok(q0.scaled(1.0 + (j as f64 - 0.5) * lambda));
        }
        m_prev = m_j;
    }
    let base = mu.cube_mass_closed(&q0);
    let growth = if base > 0.0 { m_prev / base } else { f64::INFINITY };
    Err(SelectionError::DoublingScanFailed { growth })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SelectionParams {
        SelectionParams::new(0.25, 32.0, 0.1).unwrap()
    }

    #[test]
    fn point_mass_stops_at_the_first_ring() {
        let k = KernelParams::new(2, 1.5).unwrap();
        let config = LatticeConfig::unit(2);
        let q = TripleCube::new(3, vec![1, 1]);
        let mu = DiscreteMeasure::new(2, q.center(&config), vec![1.0], 1e-3).unwrap();
        let shell = choose_shell(&k, &config, &mu, &q, &params()).unwrap();
        let lambda = params().lambda(&k);
        let q0 = q.geometric_cube(&config).scaled(2.0 * 0.25 * 32.0);
        assert_eq!(shell.side, q0.side * (1.0 + 0.5 * lambda));
        assert!(mu.cube_mass_closed(&shell.scaled(1.0 - lambda / 8.0)) >= 0.5);
    }

    #[test]
    fn runaway_growth_is_reported() {
        let k = KernelParams::new(2, 1.5).unwrap();
        let config = LatticeConfig::unit(2);
        let q = TripleCube::new(3, vec![0, 0]);
        let geo = q.geometric_cube(&config);
        let q0 = geo.scaled(2.0 * 0.25 * 32.0);
        let lambda = params().lambda(&k);
        let j_max = (1.0 / lambda) as u32;

        // One atom at the center, then an atom in each open ring between
        // Q^(j-1) and Q^(j) whose weight triples per ring: every doubling
        // test fails.
        let mut coords = q0.center.clone();
        let mut weights = vec![1.0];
        for j in 1..=j_max {
            let r = q0.side / 2.0 * (1.0 + (j as f64 - 0.5) * lambda);
            coords.extend_from_slice(&[q0.center[0] + r, q0.center[1]]);
            weights.push(3f64.powi(j as i32));
        }
        let mu = DiscreteMeasure::new(2, coords, weights, 1e-4).unwrap();
        match choose_shell(&k, &config, &mu, &q, &params()) {
            Err(SelectionError::DoublingScanFailed { growth }) => {
                assert!(growth > 2f64.powi(j_max as i32));
            }
            other => panic!("expected a doubling failure, got {other:?}"),
        }
    }

    #[test]
    fn empty_enlargement_is_rejected() {
        let k = KernelParams::new(2, 1.5).unwrap();
        let config = LatticeConfig::unit(2);
        let q = TripleCube::new(3, vec![4000, 4000]);
        let mu = DiscreteMeasure::new(2, vec![0.0, 0.0], vec![1.0], 1e-3).unwrap();
        assert!(matches!(
            choose_shell(&k, &config, &mu, &q, &params()),
            Err(SelectionError::InvalidParams(_))
        ));
    }
}

use rieszlab_measure::{dist2, Cube, DiscreteMeasure, KernelParams};

use crate::linprog::{simplex_maximize, LinearProgram};
use crate::TransformError;

/// Outcome of the oscillation maximization: the best pairing magnitude found
/// and the maximizing test function sampled at the atoms, so callers can
/// re-derive the objective through an independent pairing evaluation.
#[derive(Clone, Debug)]
pub struct OscillationResult {
    pub theta: f64,
    pub psi: Vec<f64>,
    pub dropped_pairs: usize,
}

/// Hat-function grid over AQ used by the oscillation LP: nodes_per_axis
/// corners per axis, boundary layer pinned to zero.
struct HatGrid {
    d: usize,
    nodes: usize,
    lo: Vec<f64>,
    spacing: f64,
}

impl HatGrid {
    fn new(q: &Cube, a: f64, nodes: usize) -> Self {
        let aq = q.scaled(a);
        let lo: Vec<f64> = aq.center.iter().map(|c| c - aq.side / 2.0).collect();
        HatGrid {
            d: aq.center.len(),
            nodes,
            lo,
            spacing: aq.side / (nodes - 1) as f64,
        }
    }

    fn interior_count(&self) -> usize {
        (self.nodes - 2).pow(self.d as u32)
    }

    /// Flat interior-variable index for a full-grid node, if interior.
    fn interior_index(&self, node: &[usize]) -> Option<usize> {
        let mut flat = 0;
        for &c in node {
            if c == 0 || c == self.nodes - 1 {
                return None;
            }
            flat = flat * (self.nodes - 2) + (c - 1);
        }
        Some(flat)
    }

    /// Multilinear hat weights of the nodes around p: pairs of (interior
    /// variable, weight). Boundary nodes carry coefficient zero and are
    /// omitted. Empty when p is outside the grid box.
    fn weights_at(&self, p: &[f64], out: &mut Vec<(usize, f64)>) {
        out.clear();
        let mut cell = vec![0usize; self.d];
        let mut frac = vec![0.0f64; self.d];
        for j in 0..self.d {
            let t = (p[j] - self.lo[j]) / self.spacing;
            if t < 0.0 || t > (self.nodes - 1) as f64 {
                return;
            }
            let c = (t.floor() as usize).min(self.nodes - 2);
            cell[j] = c;
            frac[j] = t - c as f64;
        }
        let mut node = vec![0usize; self.d];
        for corner in 0..(1usize << self.d) {
            let mut w = 1.0;
            for j in 0..self.d {
                if corner >> j & 1 == 1 {
                    node[j] = cell[j] + 1;
                    w *= frac[j];
                } else {
                    node[j] = cell[j];
                    w *= 1.0 - frac[j];
                }
            }
            if w == 0.0 {
                continue;
            }
            if let Some(var) = self.interior_index(&node) {
                out.push((var, w));
            }
        }
    }
}

/// Lower bound on the Lipschitz oscillation coefficient of Q at aperture A:
/// the largest coordinate of |<R(psi mu), 1>| over test functions psi that
/// are multilinear on a hat grid covering AQ, vanish on its boundary, are
/// mean-zero against mu, and whose node increments respect the 1/l(Q) slope
/// cap per axis. Solved as 2d linear programs (each signed coordinate).
///
/// The axis-wise slope cap admits functions whose Euclidean Lipschitz
/// constant reaches sqrt(d)/l(Q), so the bound can exceed the continuum
/// value by that factor; refining the grid tightens the discretization gap
/// from below.
pub fn lipschitz_oscillation(
    k: &KernelParams,
    mu: &DiscreteMeasure,
    q: &Cube,
    a: f64,
    nodes_per_axis: usize,
) -> Result<OscillationResult, TransformError> {
    if q.center.len() != k.d {
        return Err(TransformError::InvalidParams(format!(
            "cube has dimension {}, kernel expects {}",
            q.center.len(),
            k.d
        )));
    }
    if !(a > 0.0) || !a.is_finite() || nodes_per_axis < 3 {
        return Err(TransformError::InvalidParams(format!(
            "need a positive aperture and at least 3 grid nodes per axis, got {a} and {nodes_per_axis}"
        )));
    }
    let grid = HatGrid::new(q, a, nodes_per_axis);
    let nvars = grid.interior_count();
    let n = mu.len();

    // Per-atom pairing coefficients u_j[t] = w_j sum_i K_t(p_i - p_j) w_i
    // over pairs at or above the resolution scale.
    let h2 = mu.resolution() * mu.resolution();
    let mut dropped = 0usize;
    let mut u = vec![0.0f64; n * k.d];
    for i in 0..n {
        let x = mu.point(i);
        for j in (i + 1)..n {
            let y = mu.point(j);
            let d2 = dist2(x, y);
            if d2 < h2 {
                dropped += 1;
                continue;
            }
            let scale = d2.powf(-(k.s + 1.0) / 2.0) * mu.weight(i) * mu.weight(j);
            for t in 0..k.d {
                let kt = (x[t] - y[t]) * scale;
                // K_t(x - y) psi(y) w_x w_y and its mirrored orientation.
                u[j * k.d + t] += kt;
                u[i * k.d + t] -= kt;
            }
        }
    }

    // Atom hat weights, reused for the objective, the mean-zero row, and the
    // final interpolation.
    let mut atom_hats: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
    let mut scratch = Vec::new();
    for i in 0..n {
        grid.weights_at(mu.point(i), &mut scratch);
        atom_hats.push(scratch.clone());
    }

    let mut mean_row = vec![0.0f64; nvars];
    for i in 0..n {
        for &(var, w) in &atom_hats[i] {
            mean_row[var] += w * mu.weight(i);
        }
    }

    // Slope constraints on axis-adjacent node pairs; pairs with a boundary
    // node become bounds on the single interior variable.
    let cap = grid.spacing / q.side;
    let mut a_ub: Vec<Vec<f64>> = Vec::new();
    let mut b_ub: Vec<f64> = Vec::new();
    let mut node = vec![0usize; grid.d];
    loop {
        for axis in 0..grid.d {
            if node[axis] + 1 >= grid.nodes {
                continue;
            }
            let mut next = node.clone();
            next[axis] += 1;
            let a_var = grid.interior_index(&node);
            let b_var = grid.interior_index(&next);
            let mut row = vec![0.0f64; nvars];
            match (a_var, b_var) {
                (Some(x), Some(y)) => {
                    row[x] = 1.0;
                    row[y] = -1.0;
                }
                (Some(x), None) => row[x] = 1.0,
                (None, Some(y)) => row[y] = 1.0,
                (None, None) => continue,
            }
            let neg: Vec<f64> = row.iter().map(|v| -v).collect();
            a_ub.push(row);
            b_ub.push(cap);
            a_ub.push(neg);
            b_ub.push(cap);
        }
        // Odometer over the full node grid.
        let mut carry = true;
        for slot in node.iter_mut().rev() {
            if !carry {
                break;
            }
            *slot += 1;
            if *slot >= grid.nodes {
                *slot = 0;
            } else {
                carry = false;
            }
        }
        if carry {
            break;
        }
    }

    let mut best = OscillationResult {
        theta: 0.0,
        psi: vec![0.0; n],
        dropped_pairs: dropped,
    };
    for axis in 0..k.d {
        let mut objective = vec![0.0f64; nvars];
        for i in 0..n {
            for &(var, w) in &atom_hats[i] {
                objective[var] += w * u[i * k.d + axis];
            }
        }
        for sign in [1.0f64, -1.0] {
            let lp = LinearProgram {
                objective: objective.iter().map(|v| sign * v).collect(),
                a_ub: a_ub.clone(),
                b_ub: b_ub.clone(),
                a_eq: vec![mean_row.clone()],
                b_eq: vec![0.0],
            };
            let Some((c, value)) = simplex_maximize(&lp) else {
                continue;
            };
            if value > best.theta {
                best.theta = value;
                for i in 0..n {
                    best.psi[i] = atom_hats[i].iter().map(|&(var, w)| w * c[var]).sum();
                }
            }
        }
    }
    Ok(best)
}

/// Ratio of the L^2(mu) norm squared of sum_Q a_Q psi_Q / sqrt(mu(3AQ))
/// to the squared coefficient norm. Each psi_Q is validated against its
/// class: supported in AQ, mean-zero, and with slope at most 1/l(Q) between
/// atoms.
pub fn riesz_system_check(
    mu: &DiscreteMeasure,
    a_param: f64,
    cubes: &[Cube],
    psis: &[Vec<f64>],
    coeffs: &[f64],
) -> Result<f64, TransformError> {
    if cubes.len() != psis.len() || cubes.len() != coeffs.len() {
        return Err(TransformError::InvalidParams(format!(
            "need one test function and one coefficient per cube: got {} cubes, {} functions, {} coefficients",
            cubes.len(),
            psis.len(),
            coeffs.len()
        )));
    }
    if !(a_param > 0.0) || !a_param.is_finite() {
        return Err(TransformError::InvalidParams(format!(
            "aperture must be a positive real, got {a_param}"
        )));
    }
    let n = mu.len();
    for (idx, (q, psi)) in cubes.iter().zip(psis).enumerate() {
        if psi.len() != n {
            return Err(TransformError::InvalidParams(format!(
                "test function {idx} has {} values for {} atoms",
                psi.len(),
                n
            )));
        }
        let sup = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let aq = q.scaled(a_param);
        let mut mean = 0.0;
        let mut mass_scale = 0.0;
        for i in 0..n {
            if !aq.contains(mu.point(i)) && psi[i].abs() > 1e-12 * sup {
                return Err(TransformError::InvalidParams(format!(
                    "test function {idx} does not vanish outside its window"
                )));
            }
            mean += psi[i] * mu.weight(i);
            mass_scale += psi[i].abs() * mu.weight(i);
        }
        if mean.abs() > 1e-9 * mass_scale {
            return Err(TransformError::NotMeanZero(format!(
                "test function {idx} integrates to {mean:.3e} against a scale of {mass_scale:.3e}"
            )));
        }
        let cap = 1.0 / q.side;
        for i in 0..n {
            for j in (i + 1)..n {
                let dist = dist2(mu.point(i), mu.point(j)).sqrt();
                if (psi[i] - psi[j]).abs() > cap * dist * (1.0 + 1e-9) {
                    return Err(TransformError::InvalidParams(format!(
                        "test function {idx} has slope {:.3e} between atoms {i} and {j}, above the cap {:.3e}",
                        (psi[i] - psi[j]).abs() / dist,
                        cap
                    )));
                }
            }
        }
    }

    let coeff_norm: f64 = coeffs.iter().map(|a| a * a).sum();
    if coeff_norm == 0.0 {
        return Ok(0.0);
    }
    let mut scales = Vec::with_capacity(cubes.len());
    for q in cubes {
        let mass = mu.cube_mass(&q.scaled(3.0 * a_param));
        if mass <= 0.0 {
            return Err(TransformError::InvalidParams(
                "normalizing mass mu(3AQ) vanishes for one of the cubes".into(),
            ));
        }
        scales.push(mass.sqrt());
    }
    let mut lhs = 0.0;
    for i in 0..n {
        let mut v = 0.0;
        for (t, psi) in psis.iter().enumerate() {
            v += coeffs[t] * psi[i] / scales[t];
        }
        lhs += v * v * mu.weight(i);
    }
    Ok(lhs / coeff_norm)
}

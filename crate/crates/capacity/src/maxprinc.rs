use rieszlab_measure::{dist2, DiscreteMeasure, KernelParams};
use rieszlab_transforms::{adjoint_riesz, truncated_riesz};

use crate::potential::riesz_potential;
use crate::CapacityError;

/// Both sides of the fractional maximum principle, evaluated numerically:
/// the expression (|R(nu)| - I_alpha(mu) - tau)_+^p - R*(nu_vec) is supped
/// over an evaluation grid plus a far ring, with every sample classified
/// by whether it falls inside the closed support region of nu (the union
/// of its grid cells).
#[derive(Clone, Debug)]
pub struct MaxPrincipleReport {
    /// Sup over every sample, on and off the support.
    pub sup_global: f64,
    /// Sup over samples inside the support region, including the atoms.
    pub sup_support: f64,
    /// max(0, sup_global - max(0, sup_support)): how far off-support
    /// values overshoot the principle. Expected at discretization scale.
    pub violation_margin: f64,
    pub grid_points: usize,
}

/// Checks sup_global <= max(0, sup_support) for the expression above.
///
/// nu carries the signed scalar density f on its atoms; nu_field is a
/// per-atom vector density (length d * n) whose support must sit inside
/// the support of f. All field evaluations share the h-truncation of the
/// carrier measure, standing in for the bounded continuum densities.
pub fn max_principle_check(
    k: &KernelParams,
    nu: &DiscreteMeasure,
    f_signed: &[f64],
    nu_field: &[f64],
    mu: &DiscreteMeasure,
    tau: f64,
    p: f64,
    eval_spacing: f64,
) -> Result<MaxPrincipleReport, CapacityError> {
    let d = k.d;
    let n = nu.len();
    if f_signed.len() != n || nu_field.len() != d * n {
        return Err(CapacityError::InvalidParams(format!(
            "densities must match the carrier: got {} scalars and {} field entries for {} atoms",
            f_signed.len(),
            nu_field.len(),
            n
        )));
    }
    if !(tau > 0.0) || !(p > 1.0 && p < 2.0) {
        return Err(CapacityError::InvalidParams(format!(
            "need tau > 0 and p in (1,2), got tau = {tau}, p = {p}"
        )));
    }
    if !(eval_spacing > 0.0) || eval_spacing >= nu.resolution() {
        return Err(CapacityError::InvalidParams(format!(
            "evaluation spacing {eval_spacing} must be positive and strictly finer \
             than the measure grid {}",
            nu.resolution()
        )));
    }
    for i in 0..n {
        if f_signed[i] == 0.0 && (0..d).any(|t| nu_field[i * d + t] != 0.0) {
            return Err(CapacityError::InvalidParams(format!(
                "vector density must be supported where the scalar density lives \
                 (atom {i} carries field but no scalar)"
            )));
        }
    }

    let eps = nu.resolution() * (1.0 - 1e-12);
    let expression = |x: &[f64]| -> f64 {
        let r = truncated_riesz(k, nu, f_signed, eps, x);
        let mag = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        let h = (mag - riesz_potential(k, mu, x) - tau).max(0.0);
        // The adjoint shares nu's carrier, so its own h/2 cutoff applies.
        let adj = adjoint_riesz(k, nu, nu_field, x).unwrap_or(0.0);
        h.powf(p) - adj
    };
    // Samples inside a collar around the charged atoms belong to the
    // support-side sup. The collar must cover the cells, it must shrink to
    // zero with the grid so the classification converges to the true
    // support split, and it must stay wide enough that the quadrature
    // error of the kernel sums at its edge (which scales like the mass of
    // a resolution ball, h^{2-s} per unit density) is dominated by the
    // linear decay of the expression off the support. Width h^{2/(1+s)}
    // balances the last two.
    let res = nu.resolution();
    let collar = (res * 0.5 * (1.0 + 1e-9)).max(0.75 * res.powf(2.0 / (1.0 + k.s)));
    let in_support = |x: &[f64]| -> bool {
        (0..n).any(|i| {
            f_signed[i] != 0.0 && (0..d).all(|t| (x[t] - nu.point(i)[t]).abs() <= collar)
        })
    };

    let mut sup_support = f64::NEG_INFINITY;
    let mut sup_global = f64::NEG_INFINITY;
    let mut grid_points = 0usize;
    let mut take = |x: &[f64], on_support: bool| {
        let v = expression(x);
        sup_global = sup_global.max(v);
        if on_support {
            sup_support = sup_support.max(v);
        }
        grid_points += 1;
    };

    // The atoms themselves, plus an off-axis companion inside each cell.
    for i in 0..n {
        if f_signed[i] == 0.0 {
            continue;
        }
        let x = nu.point(i);
        take(x, true);
        let shifted: Vec<f64> = (0..d)
            .map(|t| x[t] + 0.31 * nu.resolution() * if t % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        take(&shifted, in_support(&shifted));
    }

    // Evaluation grid over the inflated joint bounding box, offset so no
    // grid point collides with an atom.
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    let mut scan = |m: &DiscreteMeasure| {
        for i in 0..m.len() {
            for t in 0..d {
                lo[t] = lo[t].min(m.point(i)[t]);
                hi[t] = hi[t].max(m.point(i)[t]);
            }
        }
    };
    scan(nu);
    scan(mu);
    let margin = 2.0 * nu.resolution();
    let offset = 0.2376112338792156 * eval_spacing;
    let counts: Vec<usize> = (0..d)
        .map(|t| ((hi[t] - lo[t] + 2.0 * margin) / eval_spacing).ceil() as usize + 1)
        .collect();
    let mut idx = vec![0usize; d];
    loop {
        let x: Vec<f64> = (0..d)
            .map(|t| lo[t] - margin + offset + idx[t] as f64 * eval_spacing)
            .collect();
        take(&x, in_support(&x));
        let mut t = 0;
        loop {
            if t == d {
                break;
            }
            idx[t] += 1;
            if idx[t] < counts[t] {
                break;
            }
            idx[t] = 0;
            t += 1;
        }
        if t == d {
            break;
        }
    }

    // Far-field ring: the expression tends to the adjoint tail out here,
    // and the principle must hold at infinity as well.
    let center: Vec<f64> = (0..d).map(|t| (lo[t] + hi[t]) / 2.0).collect();
    let extent = dist2(&lo, &hi).sqrt().max(nu.resolution());
    for ring in 0..2 {
        let radius = extent * (1.5 + ring as f64);
        let samples = 64usize;
        for j in 0..samples {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / samples as f64;
            let mut x = center.clone();
            x[0] += radius * angle.cos();
            x[1 % d] += radius * angle.sin();
            if d > 2 {
                x[2] += radius * (angle * 3.0).sin() * 0.2;
            }
            take(&x, false);
        }
    }
    drop(take);

    if sup_support == f64::NEG_INFINITY {
        sup_support = 0.0;
    }
    Ok(MaxPrincipleReport {
        sup_global,
        sup_support,
        violation_margin: (sup_global - sup_support.max(0.0)).max(0.0),
        grid_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_measures_give_zero_sups() {
        let k = KernelParams::new(2, 1.5).unwrap();
        let nu = DiscreteMeasure::new(2, vec![0.0, 0.0, 0.5, 0.5], vec![1.0, 1.0], 0.1).unwrap();
        let mu = DiscreteMeasure::new(2, vec![3.0, 3.0], vec![0.5], 0.1).unwrap();
        let report = max_principle_check(
            &k,
            &nu,
            &[0.0, 0.0],
            &[0.0; 4],
            &mu,
            0.5,
            1.5,
            0.04,
        )
        .unwrap();
        assert_eq!(report.sup_support, 0.0);
        assert!(report.sup_global <= 0.0);
        assert_eq!(report.violation_margin, 0.0);
    }

    #[test]
    fn huge_tau_kills_the_positive_part() {
        let k = KernelParams::new(2, 1.5).unwrap();
        let nu = DiscreteMeasure::new(
            2,
            vec![0.0, 0.0, 0.5, 0.0, 0.0, 0.5, 0.5, 0.5],
            vec![0.2, 0.3, 0.25, 0.25],
            0.5,
        )
        .unwrap();
        let mu = DiscreteMeasure::new(2, vec![4.0, 4.0], vec![0.5], 0.5).unwrap();
        let f = vec![1.0, -0.5, 0.8, 0.4];
        let field = vec![0.0; 8];
        let report =
            max_principle_check(&k, &nu, &f, &field, &mu, 1e9, 1.5, 0.2).unwrap();
        // Left side collapses to -R*(0) = 0 everywhere.
        assert_eq!(report.sup_global, 0.0);
        assert_eq!(report.violation_margin, 0.0);
    }

    #[test]
    fn field_outside_scalar_support_is_rejected() {
        let k = KernelParams::new(2, 1.5).unwrap();
        let nu = DiscreteMeasure::new(2, vec![0.0, 0.0, 0.5, 0.5], vec![1.0, 1.0], 0.1).unwrap();
        let mu = DiscreteMeasure::new(2, vec![3.0, 3.0], vec![0.5], 0.1).unwrap();
        let out = max_principle_check(
            &k,
            &nu,
            &[1.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &mu,
            0.5,
            1.5,
            0.04,
        );
        assert!(out.is_err());
    }
}

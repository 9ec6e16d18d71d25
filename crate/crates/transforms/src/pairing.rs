use rieszlab_measure::{dist2, DiscreteMeasure, KernelParams};

use crate::TransformError;

/// Truncated transform of the density f against mu, evaluated at x: the sum
/// of K(x - p_i) f(p_i) w_i over atoms strictly farther than eps from x.
/// Atoms coinciding with x never contribute, whatever the truncation.
pub fn truncated_riesz(
    k: &KernelParams,
    mu: &DiscreteMeasure,
    f: &[f64],
    eps: f64,
    x: &[f64],
) -> Vec<f64> {
    let mut out = vec![0.0; k.d];
    let cut = eps.max(0.0);
    for i in 0..mu.len() {
        let p = mu.point(i);
        let d2 = dist2(x, p);
        // Compare rounded distances, not squares: truncating exactly at the
        // diameter must silence every pair.
        if d2.sqrt() <= cut {
            continue;
        }
        let scale = d2.powf(-(k.s + 1.0) / 2.0) * f[i] * mu.weight(i);
        for j in 0..k.d {
            out[j] += (x[j] - p[j]) * scale;
        }
    }
    out
}

/// A symmetrized double sum over atom pairs, with the count of pairs that
/// were dropped for sitting below the resolution scale.
#[derive(Clone, Debug)]
pub struct BilinearPairing {
    pub value: Vec<f64>,
    pub dropped_pairs: usize,
}

/// The pairing of R(f mu) against psi in L^2(mu), written as a double sum of
/// K(x - y) times the antisymmetrized product (f(y)psi(x) - psi(y)f(x)) / 2.
/// Pairs closer than the resolution are dropped and counted: they stand in
/// for the diagonal, which carries no mass for a diffuse measure.
pub fn bilinear_form(
    k: &KernelParams,
    mu: &DiscreteMeasure,
    f: &[f64],
    psi: &[f64],
) -> Result<BilinearPairing, TransformError> {
    if f.len() != mu.len() || psi.len() != mu.len() {
        return Err(TransformError::InvalidParams(format!(
            "densities must have one value per atom: got {} and {} for {} atoms",
            f.len(),
            psi.len(),
            mu.len()
        )));
    }
    let h2 = mu.resolution() * mu.resolution();
    let mut value = vec![0.0; k.d];
    let mut dropped = 0usize;
    for i in 0..mu.len() {
        let x = mu.point(i);
        for j in (i + 1)..mu.len() {
            let y = mu.point(j);
            let d2 = dist2(x, y);
            if d2 < h2 {
                dropped += 1;
                continue;
            }
            // Both orientations of the ordered pair, folded into one term.
            let hfp = f[j] * psi[i] - psi[j] * f[i];
            let scale = d2.powf(-(k.s + 1.0) / 2.0) * hfp * mu.weight(i) * mu.weight(j);
            for t in 0..k.d {
                value[t] += (x[t] - y[t]) * scale;
            }
        }
    }
    Ok(BilinearPairing {
        value,
        dropped_pairs: dropped,
    })
}

/// Adjoint transform of a vector density against nu, evaluated at x: the sum
/// of K(x - q_i) . v_i u_i. Atoms inside the querying point's own resolution
/// cell (distance below h/2) are skipped, so evaluation at an atom reads the
/// field generated by everything else.
pub fn adjoint_riesz(
    k: &KernelParams,
    nu: &DiscreteMeasure,
    field: &[f64],
    x: &[f64],
) -> Result<f64, TransformError> {
    if field.len() != k.d * nu.len() {
        return Err(TransformError::InvalidParams(format!(
            "vector field must have d = {} entries per atom: got {} for {} atoms",
            k.d,
            field.len(),
            nu.len()
        )));
    }
    let cut2 = (nu.resolution() / 2.0) * (nu.resolution() / 2.0);
    let mut out = 0.0;
    for i in 0..nu.len() {
        let p = nu.point(i);
        let d2 = dist2(x, p);
        if d2 < cut2 {
            continue;
        }
        let scale = d2.powf(-(k.s + 1.0) / 2.0) * nu.weight(i);
        for j in 0..k.d {
            out += (x[j] - p[j]) * field[i * k.d + j] * scale;
        }
    }
    Ok(out)
}

/// The pairing of R(f mu) against the constant 1, computed through the
/// two-part splitting that makes sense for infinite measures: a local
/// bilinear pairing against a Lipschitz cutoff that is 1 near supp f, plus
/// the far-field sum weighted by (1 - cutoff). The cutoff ramps from 1 to 0
/// over `margin` beyond the support of f; the returned value does not depend
/// on that choice beyond rounding.
///
/// f must be mean-zero against mu to relative 1e-12, or the far tail would
/// not be summable in the continuum; we refuse rather than return a number
/// whose meaning has quietly changed.
pub fn reflectionless_defect(
    k: &KernelParams,
    mu: &DiscreteMeasure,
    f: &[f64],
    margin: f64,
) -> Result<Vec<f64>, TransformError> {
    if f.len() != mu.len() {
        return Err(TransformError::InvalidParams(format!(
            "density must have one value per atom: got {} for {} atoms",
            f.len(),
            mu.len()
        )));
    }
    if !(margin > 0.0) || !margin.is_finite() {
        return Err(TransformError::InvalidParams(format!(
            "cutoff margin must be a positive real, got {margin}"
        )));
    }
    let mean: f64 = (0..mu.len()).map(|i| f[i] * mu.weight(i)).sum();
    let scale: f64 = (0..mu.len()).map(|i| f[i].abs() * mu.weight(i)).sum();
    if mean.abs() > 1e-12 * scale {
        return Err(TransformError::NotMeanZero(format!(
            "integral of f against mu is {mean:.3e} against a mass scale of {scale:.3e}"
        )));
    }

    let support: Vec<usize> = (0..mu.len()).filter(|&i| f[i] != 0.0).collect();
    if support.is_empty() {
        return Ok(vec![0.0; k.d]);
    }

    // Cutoff: 1 on the support, linear ramp to 0 across [margin, 2 margin].
    let cutoff: Vec<f64> = (0..mu.len())
        .map(|i| {
            let gap = support
                .iter()
                .map(|&j| dist2(mu.point(i), mu.point(j)).sqrt())
                .fold(f64::INFINITY, f64::min);
            ((2.0 - gap / margin).clamp(0.0, 1.0)).min(1.0)
        })
        .collect();

    let local = bilinear_form(k, mu, f, &cutoff)?;
    let h = mu.resolution();
    let mut total = local.value;
    for i in 0..mu.len() {
        if cutoff[i] >= 1.0 {
            continue;
        }
        let field = truncated_riesz(k, mu, f, h * (1.0 - 1e-12), mu.point(i));
        let w = (1.0 - cutoff[i]) * mu.weight(i);
        for t in 0..k.d {
            total[t] += w * field[t];
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel() -> KernelParams {
        KernelParams::new(2, 1.5).unwrap()
    }

    #[test]
    fn truncation_keeps_only_far_atoms() {
        let k = kernel();
        let mu = DiscreteMeasure::new(2, vec![0.0, 0.0], vec![1.0], 0.01).unwrap();
        let v = truncated_riesz(&k, &mu, &[1.0], 0.5, &[1.0, 0.0]);
        assert!((v[0] - 1.0).abs() < 1e-15 && v[1] == 0.0);
        // eps at or past the distance removes the atom.
        let v = truncated_riesz(&k, &mu, &[1.0], 1.0, &[1.0, 0.0]);
        assert_eq!(v, vec![0.0, 0.0]);
    }

    #[test]
    fn symmetric_pair_cancels() {
        let k = kernel();
        let mu =
            DiscreteMeasure::new(2, vec![-1.0, 0.0, 1.0, 0.0], vec![1.0, 1.0], 0.01).unwrap();
        let v = truncated_riesz(&k, &mu, &[1.0, 1.0], 0.5, &[0.0, 0.0]);
        assert_eq!(v, vec![0.0, 0.0]);
    }

    #[test]
    fn pairing_with_itself_vanishes() {
        let k = kernel();
        let mu = DiscreteMeasure::new(
            2,
            vec![0.0, 0.0, 1.0, 0.2, 0.4, 0.9],
            vec![1.0, 2.0, 0.5],
            0.01,
        )
        .unwrap();
        let f = vec![0.3, -0.2, 0.9];
        let p = bilinear_form(&k, &mu, &f, &f).unwrap();
        assert_eq!(p.value, vec![0.0, 0.0]);
        assert_eq!(p.dropped_pairs, 0);
    }

    #[test]
    fn pairing_is_antisymmetric_in_its_arguments() {
        let k = kernel();
        let mu = DiscreteMeasure::new(
            2,
            vec![0.0, 0.0, 1.0, 0.2, 0.4, 0.9, -0.3, 0.4],
            vec![1.0, 2.0, 0.5, 1.3],
            0.01,
        )
        .unwrap();
        let f = vec![0.3, -0.2, 0.9, 0.1];
        let g = vec![-1.0, 0.4, 0.2, 0.8];
        let fg = bilinear_form(&k, &mu, &f, &g).unwrap();
        let gf = bilinear_form(&k, &mu, &g, &f).unwrap();
        for t in 0..2 {
            assert_eq!(fg.value[t], -gf.value[t]);
        }
    }

    #[test]
    fn below_resolution_pairs_are_counted() {
        let k = kernel();
        let mu = DiscreteMeasure::new(2, vec![0.0, 0.0, 0.6, 0.0], vec![1.0, 1.0], 1.0).unwrap();
        let p = bilinear_form(&k, &mu, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(p.dropped_pairs, 1);
        assert_eq!(p.value, vec![0.0, 0.0]);
    }

    #[test]
    fn defect_requires_mean_zero() {
        let k = kernel();
        let mu =
            DiscreteMeasure::new(2, vec![0.0, 0.0, 1.0, 0.0], vec![1.0, 1.0], 0.01).unwrap();
        assert!(matches!(
            reflectionless_defect(&k, &mu, &[1.0, 0.0], 0.5),
            Err(TransformError::NotMeanZero(_))
        ));
        assert!(reflectionless_defect(&k, &mu, &[1.0, -1.0], 0.5).is_ok());
    }

    #[test]
    fn single_atom_admits_only_the_zero_density() {
        let k = kernel();
        let mu = DiscreteMeasure::new(2, vec![0.3, 0.7], vec![2.0], 0.01).unwrap();
        let v = reflectionless_defect(&k, &mu, &[0.0], 1.0).unwrap();
        assert_eq!(v, vec![0.0, 0.0]);
    }
}

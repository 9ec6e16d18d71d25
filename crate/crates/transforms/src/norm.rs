use rieszlab_measure::{dist2, DiscreteMeasure, KernelParams};

use crate::TransformError;

#[derive(Clone, Debug)]
pub struct NormConfig {
    /// Dense pair assembly is quadratic in atoms; refuse beyond this count.
    pub max_atoms: usize,
    /// Relative tolerance on the top eigenvalue of the normal matrix.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NormConfig {
    fn default() -> Self {
        NormConfig {
            max_atoms: 6000,
            tol: 1e-6,
            max_iter: 5000,
        }
    }
}

/// Spectral norms of the truncated transform matrices, one per truncation
/// radius on the dyadic grid, in ascending order of eps.
#[derive(Clone, Debug)]
pub struct NormScan {
    pub per_eps: Vec<(f64, f64)>,
    pub norm: f64,
}

pub fn operator_norm(k: &KernelParams, mu: &DiscreteMeasure) -> Result<NormScan, TransformError> {
    operator_norm_with(k, mu, &NormConfig::default())
}

/// Estimate the L^2(mu) operator norm: for each eps = h 2^j up to the cloud
/// diameter, assemble the weighted kernel matrix with entries
/// K_t(p_i - p_l) sqrt(w_i w_l) on pairs farther than eps, stack the d
/// coordinate blocks, and take the largest singular value by power iteration
/// on the normal matrix. The reported norm is the maximum over the grid.
///
/// The matrices are antisymmetric per coordinate, so the normal matrix is
/// applied as -sum_t A_t(A_t v) over a pair list sorted by distance; the
/// active prefix grows as eps shrinks, and each eps warm-starts from the
/// previous eigenvector. Power iteration approaches the top eigenvalue from
/// below, so the scan never overstates the norm.
pub fn operator_norm_with(
    k: &KernelParams,
    mu: &DiscreteMeasure,
    config: &NormConfig,
) -> Result<NormScan, TransformError> {
    let n = mu.len();
    if n > config.max_atoms {
        return Err(TransformError::TooLarge(format!(
            "{n} atoms exceed the dense pair budget of {}; a tree-accelerated mode is needed \
             for clouds this large",
            config.max_atoms
        )));
    }
    if n <= 1 {
        return Ok(NormScan {
            per_eps: Vec::new(),
            norm: 0.0,
        });
    }
    if !(config.tol > 0.0) || config.max_iter == 0 {
        return Err(TransformError::InvalidParams(format!(
            "power iteration needs a positive tolerance and iteration budget, got {} and {}",
            config.tol, config.max_iter
        )));
    }

    let d = k.d;
    let h = mu.resolution();
    let diam = mu.diameter();
    let mut eps_grid = Vec::new();
    let mut eps = h;
    while eps <= diam {
        eps_grid.push(eps);
        eps *= 2.0;
    }

    // Pairs sorted by distance descending; entries filled in that order so
    // each eps activates a prefix.
    let mut order: Vec<(f64, u32, u32)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for l in (i + 1)..n {
            order.push((dist2(mu.point(i), mu.point(l)).sqrt(), i as u32, l as u32));
        }
    }
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut entries = vec![0.0f64; order.len() * d];
    for (p, &(dist, i, l)) in order.iter().enumerate() {
        let scale = dist.powf(-(k.s + 1.0)) * (mu.weight(i as usize) * mu.weight(l as usize)).sqrt();
        let x = mu.point(i as usize);
        let y = mu.point(l as usize);
        for t in 0..d {
            entries[p * d + t] = (x[t] - y[t]) * scale;
        }
    }

    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut block = vec![0.0f64; n * d];
    let mut out = vec![0.0f64; n];
    let mut per_eps = Vec::with_capacity(eps_grid.len());
    let mut active = 0usize;
    for &eps in eps_grid.iter().rev() {
        while active < order.len() && order[active].0 > eps {
            active += 1;
        }
        if active == 0 {
            per_eps.push((eps, 0.0));
            continue;
        }
        let lambda = top_eigenvalue(
            &order[..active],
            &entries[..active * d],
            d,
            &mut v,
            &mut block,
            &mut out,
            config,
        );
        per_eps.push((eps, lambda.max(0.0).sqrt()));
    }
    per_eps.reverse();
    let norm = per_eps.iter().map(|&(_, s)| s).fold(0.0, f64::max);
    Ok(NormScan { per_eps, norm })
}

/// One multiply by the normal matrix -sum_t A_t^2, exploiting antisymmetry.
fn apply_normal(
    pairs: &[(f64, u32, u32)],
    entries: &[f64],
    d: usize,
    n: usize,
    v: &[f64],
    block: &mut [f64],
    out: &mut [f64],
) {
    block.fill(0.0);
    for (p, &(_, i, l)) in pairs.iter().enumerate() {
        let (i, l) = (i as usize, l as usize);
        for t in 0..d {
            let g = entries[p * d + t];
            block[t * n + i] += g * v[l];
            block[t * n + l] -= g * v[i];
        }
    }
    out.fill(0.0);
    for (p, &(_, i, l)) in pairs.iter().enumerate() {
        let (i, l) = (i as usize, l as usize);
        for t in 0..d {
            let g = entries[p * d + t];
            out[i] -= g * block[t * n + l];
            out[l] += g * block[t * n + i];
        }
    }
}

fn top_eigenvalue(
    pairs: &[(f64, u32, u32)],
    entries: &[f64],
    d: usize,
    v: &mut [f64],
    block: &mut [f64],
    out: &mut [f64],
    config: &NormConfig,
) -> f64 {
    let n = v.len();
    let mut lambda = 0.0f64;
    for iter in 0..config.max_iter {
        apply_normal(pairs, entries, d, n, v, block, out);
        let norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            if iter == 0 {
                // The start vector can sit in the kernel; nudge it off with a
                // fixed, seedless perturbation and retry once per component.
                for (i, x) in v.iter_mut().enumerate() {
                    *x += 0.3 * ((i as f64) + 0.7).sin();
                }
                let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.iter_mut().for_each(|x| *x /= len);
                continue;
            }
            return lambda;
        }
        let next = v.iter().zip(out.iter()).map(|(a, b)| a * b).sum::<f64>();
        for (dst, src) in v.iter_mut().zip(out.iter()) {
            *dst = src / norm;
        }
        if iter > 0 && (next - lambda).abs() <= config.tol * next.abs() {
            return next;
        }
        lambda = next;
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel() -> KernelParams {
        KernelParams::new(2, 1.5).unwrap()
    }

    #[test]
    fn degenerate_clouds_have_zero_norm() {
        let k = kernel();
        let empty = DiscreteMeasure::new(2, vec![], vec![], 0.1).unwrap();
        assert_eq!(operator_norm(&k, &empty).unwrap().norm, 0.0);
        let single = DiscreteMeasure::new(2, vec![0.5, 0.5], vec![3.0], 0.1).unwrap();
        assert_eq!(operator_norm(&k, &single).unwrap().norm, 0.0);
    }

    #[test]
    fn two_atoms_match_the_closed_form() {
        let k = kernel();
        for t in [1.0, 0.7] {
            let mu =
                DiscreteMeasure::new(2, vec![0.0, 0.0, t, 0.0], vec![1.0, 2.0], 0.25).unwrap();
            let scan = operator_norm(&k, &mu).unwrap();
            // Single pair: sigma = |K(t e1)| sqrt(w1 w2) = t^{-s} sqrt(2).
            let expect = t.powf(-k.s) * 2f64.sqrt();
            assert!(
                (scan.norm - expect).abs() <= 1e-5 * expect,
                "t = {t}: {} vs {expect}",
                scan.norm
            );
            if t == 1.0 {
                // eps = 1.0 lands on the grid and excludes the only pair.
                let last = scan.per_eps.last().unwrap();
                assert_eq!((last.0, last.1), (1.0, 0.0));
            }
        }
    }

    #[test]
    fn atom_cap_is_enforced() {
        let k = kernel();
        let mu = DiscreteMeasure::new(
            2,
            (0..12).flat_map(|i| vec![i as f64, 0.0]).collect(),
            vec![1.0; 12],
            0.1,
        )
        .unwrap();
        let config = NormConfig {
            max_atoms: 10,
            ..NormConfig::default()
        };
        match operator_norm_with(&k, &mu, &config) {
            Err(TransformError::TooLarge(msg)) => assert!(msg.contains("tree-accelerated")),
            other => panic!("expected the cap to fire, got {other:?}"),
        }
    }
}

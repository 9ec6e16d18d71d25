use rieszlab_kernels::SuppressionField;
use rieszlab_measure::{dist2, Ball, DiscreteMeasure, KernelParams};

use crate::SelectionError;

/// Build the exceptional set for a sampled maximal density: the union of
/// balls B(x, 3r) over atoms x and dyadic radii r = h 2^j up to the support
/// diameter, kept when B(x, r) is doubling (mass of B(x, 15r) at most
/// 225^s times that of B(x, r)) and the integral of `d_bar` over B(x, 3r)
/// exceeds `t` times the mass of B(x, r).
///
/// `d_bar[i]` is the caller's density value at atom i, so the integral is a
/// plain weighted sum. The result is returned as a suppression field with no
/// floor, ready to feed the suppressed kernel.
pub fn exceptional_set(
    k: &KernelParams,
    mu: &DiscreteMeasure,
    d_bar: &[f64],
    t: f64,
) -> Result<SuppressionField, SelectionError> {
    if d_bar.len() != mu.len() {
        return Err(SelectionError::InvalidParams(format!(
            "density sample has {} entries for {} atoms",
            d_bar.len(),
            mu.len()
        )));
    }
    if d_bar.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(SelectionError::InvalidParams(
            "density samples must be finite and nonnegative".into(),
        ));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(SelectionError::InvalidParams(format!(
            "threshold must be positive and finite, got {t}"
        )));
    }

    let factor = 225f64.powf(k.s);
    let r_top = mu.diameter().max(mu.resolution());
    let mut balls = Vec::new();
    for i in 0..mu.len() {
        let x = mu.point(i);
        let mut r = mu.resolution();
        while r <= r_top {
            let m_r = mu.ball_mass(&Ball::new(x.to_vec(), r));
            let m_15r = mu.ball_mass(&Ball::new(x.to_vec(), 15.0 * r));
            if m_15r <= factor * m_r {
                let r3_sq = 9.0 * r * r;
                let integral: f64 = (0..mu.len())
                    .filter(|&j| dist2(mu.point(j), x) < r3_sq)
                    .map(|j| d_bar[j] * mu.weight(j))
                    .sum();
                if integral > t * m_r {
                    balls.push(Ball::new(x.to_vec(), 3.0 * r));
                }
            }
            r *= 2.0;
        }
    }
    Ok(SuppressionField::new(balls, 0.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom_threshold_is_sharp() {
        let k = KernelParams::new(2, 1.5).unwrap();
        let mu = DiscreteMeasure::new(2, vec![0.3, 0.7], vec![2.0], 0.5).unwrap();
        // One atom: every ball is doubling and the integral test reads
        // d_bar[0] > t.
        let hot = exceptional_set(&k, &mu, &[5.0], 4.0).unwrap();
        assert!(!hot.is_empty());
        let cold = exceptional_set(&k, &mu, &[5.0], 5.0).unwrap();
        assert!(cold.is_empty());
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let k = KernelParams::new(2, 1.5).unwrap();
        let mu = DiscreteMeasure::new(2, vec![0.0, 0.0], vec![1.0], 0.5).unwrap();
        assert!(exceptional_set(&k, &mu, &[1.0, 2.0], 2.0).is_err());
        assert!(exceptional_set(&k, &mu, &[-1.0], 2.0).is_err());
        assert!(exceptional_set(&k, &mu, &[1.0], 0.0).is_err());
    }
}

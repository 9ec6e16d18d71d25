use rieszlab_measure::{dist2, DiscreteMeasure, KernelParams};

/// Riesz potential I_alpha(mu)(x) = sum_i w_i |x - p_i|^{1-s}, with the
/// distance clamped below at the measure's resolution. The clamp stands in
/// for the bounded density of the continuum object.
pub fn riesz_potential(k: &KernelParams, mu: &DiscreteMeasure, x: &[f64]) -> f64 {
    let h = mu.resolution();
    let mut total = 0.0;
    for i in 0..mu.len() {
        let dist = dist2(x, mu.point(i)).sqrt().max(h);
        total += mu.weight(i) * dist.powf(1.0 - k.s);
    }
    total
}

/// Truncated Wolff potential of a weighted atom cloud at the probe x:
///
///   P(x) = int_h^R (M(x, r) / r^s)^2 dr / r,
///
/// with M(x, r) the open-ball mass. M is piecewise constant in r, so the
/// integral is an exact sum of power segments between the sorted atom
/// distances. Returns the value and, when `grad` is given, fills it with
/// dP/dw_i (each atom contributes 2 M_k I_k on every segment it sits inside).
pub fn wolff_potential(
    k: &KernelParams,
    points: &[f64],
    weights: &[f64],
    x: &[f64],
    h: f64,
    r_max: f64,
    mut grad: Option<&mut [f64]>,
) -> f64 {
    let d = k.d;
    let n = weights.len();
    let two_s = 2.0 * k.s;
    if let Some(g) = grad.as_deref_mut() {
        g.iter_mut().for_each(|v| *v = 0.0);
    }
    if n == 0 || !(r_max > h) {
        return 0.0;
    }
    let mut order: Vec<usize> = (0..n).collect();
    let dist_to = |i: usize| dist2(x, &points[i * d..(i + 1) * d]).sqrt();
    order.sort_by(|&a, &b| dist_to(a).total_cmp(&dist_to(b)));

    // Walk segments of constant ball mass from h outward. The open ball
    // B(x, r) holds atom i exactly when dist_i < r, so the mass on a
    // segment (a, b] counts every atom with dist < b... taking the segment
    // between consecutive distances, atoms with dist <= a are inside.
    let mut value = 0.0;
    let mut mass = 0.0f64;
    let mut idx = 0;
    // Atoms at distance below the inner cutoff are inside every ball.
    while idx < n && dist_to(order[idx]) <= h {
        mass += weights[order[idx]];
        idx += 1;
    }
    let mut lo = h;
    let mut segments: Vec<(f64, f64, f64, usize)> = Vec::new();
    loop {
        let hi = if idx < n { dist_to(order[idx]).min(r_max) } else { r_max };
        if hi > lo && mass > 0.0 {
            let integral = (lo.powf(-two_s) - hi.powf(-two_s)) / two_s;
            value += mass * mass * integral;
            segments.push((mass, integral, lo, idx));
        } else if hi > lo {
            segments.push((0.0, (lo.powf(-two_s) - hi.powf(-two_s)) / two_s, lo, idx));
        }
        if idx >= n || dist_to(order[idx]) >= r_max {
            break;
        }
        lo = dist_to(order[idx]);
        while idx < n && dist_to(order[idx]) == lo {
            mass += weights[order[idx]];
            idx += 1;
        }
    }
    if let Some(g) = grad {
        // Suffix sums of M_k I_k: atom i lies inside every segment whose
        // lower edge is at or beyond its distance (and all segments when it
        // sits under the h cutoff).
        let mut suffix = vec![0.0f64; segments.len() + 1];
        for (j, &(m, integral, _, _)) in segments.iter().enumerate().rev() {
            suffix[j] = suffix[j + 1] + m * integral;
        }
        for i in 0..n {
            let di = dist_to(i);
            if di >= r_max {
                continue;
            }
            let first = segments
                .iter()
                .position(|&(_, _, lo, _)| lo >= di)
                .unwrap_or(segments.len());
            // Under the cutoff the atom is inside from the very first
            // segment; position() already lands there since lo >= h > di.
            g[i] = 2.0 * suffix[first];
        }
    }
    value
}

use rieszlab_measure::{dist2, Cube, DiscreteMeasure, KernelParams};

use crate::WolffError;

/// The Wolff energy of mu over Q: for each atom x in Q, the radial profile
/// r -> mu(B(x,r) cap Q) is a step function jumping at the sorted distances
/// to the other atoms of Q, so the inner integral
/// int (profile / r^s)^p dr/r over [h, diam Q] has a closed form on each
/// step: M^p (lo^{-ps} - hi^{-ps}) / (ps). Profiles are summed against atom
/// weights. O(N^2 log N) with a per-atom sort.
pub fn wolff_energy(
    k: &KernelParams,
    mu: &DiscreteMeasure,
    q: &Cube,
    p: f64,
) -> Result<f64, WolffError> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(WolffError::InvalidParams(format!(
            "profile exponent must be at least 1, got {p}"
        )));
    }
    let h = mu.resolution();
    let top = q.diam();
    if !(top > h) {
        return Ok(0.0);
    }
    let inside: Vec<usize> = (0..mu.len()).filter(|&i| q.contains(mu.point(i))).collect();
    let ps = p * k.s;

    let mut total = 0.0;
    let mut d2w: Vec<(f64, f64)> = Vec::with_capacity(inside.len());
    for &i in &inside {
        let x = mu.point(i);
        d2w.clear();
        for &j in &inside {
            d2w.push((dist2(mu.point(j), x), mu.weight(j)));
        }
        d2w.sort_by(|a, b| a.0.total_cmp(&b.0));
        total += mu.weight(i) * profile_integral(&d2w, h, top, p, ps);
    }
    Ok(total)
}

/// Closed-form integral of (M(r)/r^s)^p dr/r over [h, top] for the step
/// profile M(r) = sum of weights at squared distance < r^2. Open balls: on
/// the interval (d_i, d_{i+1}] the profile equals the cumulative mass
/// through d_i.
fn profile_integral(sorted_d2w: &[(f64, f64)], h: f64, top: f64, p: f64, ps: f64) -> f64 {
    let mut sum = 0.0;
    let mut cum = 0.0;
    let mut i = 0;
    while i < sorted_d2w.len() {
        let d2 = sorted_d2w[i].0;
        // Fold ties so each breakpoint appears once.
        while i < sorted_d2w.len() && sorted_d2w[i].0 == d2 {
            cum += sorted_d2w[i].1;
            i += 1;
        }
        let lo = d2.sqrt().max(h);
        let hi = if i < sorted_d2w.len() {
            sorted_d2w[i].0.sqrt().min(top)
        } else {
            top
        };
        if hi > lo {
            sum += cum.powf(p) * (lo.powf(-ps) - hi.powf(-ps)) / ps;
        }
    }
    sum
}

/// Truncated continuous energy over a region: the ordered-pair sum of
/// w_i w_j |p_i - p_j|^{-(s-1)} over distinct atoms of the region at
/// distance in [h, r_cut). Pairs closer than the resolution are excluded
/// with the diagonal; the kernel is evaluated from squared distances.
pub fn continuous_energy(
    k: &KernelParams,
    mu: &DiscreteMeasure,
    region: &Cube,
    r_cut: f64,
) -> f64 {
    let inside: Vec<usize> = (0..mu.len())
        .filter(|&i| region.contains(mu.point(i)))
        .collect();
    let h2 = mu.resolution() * mu.resolution();
    let cut2 = r_cut * r_cut;
    let expo = -(k.s - 1.0) / 2.0;
    let mut sum = 0.0;
    for (a, &i) in inside.iter().enumerate() {
        for &j in &inside[a + 1..] {
            let d2 = dist2(mu.point(i), mu.point(j));
            if d2 >= h2 && d2 < cut2 {
                sum += 2.0 * mu.weight(i) * mu.weight(j) * d2.powf(expo);
            }
        }
    }
    sum
}

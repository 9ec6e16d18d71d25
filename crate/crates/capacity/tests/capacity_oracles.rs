use rieszlab_capacity::{
    cap_s_estimate, gamma_plus_estimate, max_principle_check, minimize_functional,
    riesz_potential, wolff_potential, CompactSetMask, SolverOptions, VariationalConfig,
    VariationalProblem,
};
use rieszlab_generators::uniform_cube;
use rieszlab_kernels::{adaptive_simpson, poisson_kernel};
use rieszlab_measure::{DiscreteMeasure, KernelParams};

fn kernel() -> KernelParams {
    KernelParams::new(2, 1.5).unwrap()
}

/// Least-squares slope of ys against xs.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// n-by-n block of cells with the given side, centers pitch apart.
fn block_mask(n: usize, side: f64, pitch: f64) -> CompactSetMask {
    let mut centers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            centers.push(i as f64 * pitch);
            centers.push(j as f64 * pitch);
        }
    }
    CompactSetMask::new(2, centers, side).unwrap()
}

/// Row of touching cells of side h covering [0, n*h] x {0}.
fn segment_mask(n: usize, h: f64) -> CompactSetMask {
    let mut centers = Vec::new();
    for i in 0..n {
        centers.push((i as f64 + 0.5) * h);
        centers.push(0.0);
    }
    CompactSetMask::new(2, centers, h).unwrap()
}

// ---------------------------------------------------------------- potentials

#[test]
fn potential_of_a_unit_atom_has_the_closed_form() {
    let k = kernel();
    let mu = DiscreteMeasure::new(2, vec![1.0, 1.0], vec![1.0], 1e-6).unwrap();
    let v = riesz_potential(&k, &mu, &[1.0, 3.0]);
    assert_eq!(v, 2.0f64.powf(-0.5));
    let empty = DiscreteMeasure::new(2, vec![], vec![], 1e-6).unwrap();
    assert_eq!(riesz_potential(&k, &empty, &[0.3, 0.4]), 0.0);
}

#[test]
fn potential_decreases_along_rays_from_a_single_atom() {
    let k = kernel();
    let mu = DiscreteMeasure::new(2, vec![0.25, -0.5], vec![0.7], 1e-6).unwrap();
    for dir in [[1.0, 0.0], [0.0, -1.0], [0.6, 0.8]] {
        let mut prev = f64::INFINITY;
        let mut r = 0.01;
        while r < 50.0 {
            let x = [0.25 + r * dir[0], -0.5 + r * dir[1]];
            let v = riesz_potential(&k, &mu, &x);
            assert!(
                v < prev,
                "potential must strictly decrease outward, got {v} after {prev} at r = {r}"
            );
            prev = v;
            r *= 1.37;
        }
    }
}

/// Radial profile of the alpha-Poisson smoothing of a unit atom: the
/// integral of P^alpha_r(y) |x - y|^{1-s} dy over |y| >= r, computed by
/// nested adaptive quadrature in polar coordinates. The angular pass
/// substitutes theta = v^2 so the crossing of the singular ring stays
/// smooth; the radial pass substitutes rho = r + u^4 against the
/// (rho^2 - r^2)^{-alpha/2} edge and adds an explicit power-law tail.
fn smoothed_atom_profile(k: &KernelParams, r: f64, dist: f64) -> f64 {
    let exponent = (1.0 - k.s) / 2.0;
    let angular = |rho: f64| -> f64 {
        let mut f = |v: f64| {
            let theta = v * v;
            let d2 = dist * dist + rho * rho - 2.0 * dist * rho * theta.cos();
            2.0 * v * d2.max(1e-28).powf(exponent)
        };
        2.0 * adaptive_simpson(&mut f, 0.0, std::f64::consts::PI.sqrt(), 1e-7)
    };
    let weight = |rho: f64| -> f64 {
        poisson_kernel(k, r, &[rho, 0.0]).unwrap() * rho * angular(rho)
    };

    let edge = 0.6 * r;
    let cut = 40.0;
    // The angular integral picks up a sqrt kink in rho where the ring
    // crosses the atom; the far pass below substitutes it away, which only
    // works while the crossing stays out of the edge segment.
    assert!(dist < 0.999 * r || dist > (r + edge) * 1.001);
    let mut near = |u: f64| {
        let rho = r + u * u * u * u;
        weight(rho) * 4.0 * u * u * u
    };
    // For alpha = 3/2 the substituted integrand tends to a constant at
    // u = 0, flat to O(u^4); starting just above the rounding floor of
    // r + u^4 and extending with that constant loses nothing measurable.
    let u0 = 2e-3;
    let near_part =
        adaptive_simpson(&mut near, u0, edge.powf(0.25), 3e-7) + near(u0) * u0;
    let far_part = if dist > r + edge && dist < cut {
        // rho = dist +- t^2 straightens the kink at the crossing.
        let mut below = |t: f64| weight(dist - t * t) * 2.0 * t;
        let mut above = |t: f64| weight(dist + t * t) * 2.0 * t;
        adaptive_simpson(&mut below, 0.0, (dist - r - edge).sqrt(), 2e-7)
            + adaptive_simpson(&mut above, 0.0, (cut - dist).sqrt(), 2e-7)
    } else {
        let mut far = |rho: f64| weight(rho);
        adaptive_simpson(&mut far, r + edge, cut, 3e-7)
    };
    // Beyond the cut the integrand is a clean power law rho^{-(alpha+s)}.
    let tail = weight(cut) * cut / (k.alpha + k.s - 1.0);
    assert!(
        tail <= 3e-3 * (near_part + far_part),
        "tail {tail} too large against {}",
        near_part + far_part
    );
    near_part + far_part + tail
}

#[test]
fn poisson_smoothing_preserves_the_potential_outside_the_ball() {
    let k = kernel();
    let r = 0.83;
    // Atom outside the closed ball: smoothing changes nothing.
    let outside = smoothed_atom_profile(&k, r, 2.0);
    let reference = 2.0f64.powf(1.0 - k.s);
    let rel = (outside / reference - 1.0).abs();
    assert!(
        rel <= 8e-3,
        "smoothed potential should match {reference} outside, got {outside} (rel {rel:.2e})"
    );
    // Atom inside the ball: smoothing strictly flattens the peak.
    let inside = smoothed_atom_profile(&k, r, 0.3);
    let peak = 0.3f64.powf(1.0 - k.s);
    assert!(
        inside < 0.98 * peak,
        "smoothed potential must drop strictly inside, got {inside} against {peak}"
    );
    assert!(inside > 0.0);
}

#[test]
fn poisson_smoothing_never_raises_the_potential_of_a_cloud() {
    let k = kernel();
    let r = 0.83;
    let mu = DiscreteMeasure::new(
        2,
        vec![0.0, 0.0, 0.31, 0.17, -0.22, 0.29],
        vec![0.5, 0.3, 0.2],
        1e-6,
    )
    .unwrap();
    let mut smoothed_at = |x: [f64; 2]| -> f64 {
        (0..mu.len())
            .map(|i| {
                let p = mu.point(i);
                let dist = ((x[0] - p[0]).powi(2) + (x[1] - p[1]).powi(2)).sqrt();
                mu.weight(i) * smoothed_atom_profile(&k, r, dist)
            })
            .sum()
    };
    for x in [[2.03, 0.41], [0.19, 0.12]] {
        let direct = riesz_potential(&k, &mu, &x);
        let smoothed = smoothed_at(x);
        assert!(
            smoothed <= direct * (1.0 + 8e-3),
            "mean-value inequality failed at {x:?}: smoothed {smoothed} > direct {direct}"
        );
    }
    // All three atoms sit inside B(x, r) for the second sample, so the
    // drop there is genuine, not quadrature slack.
    let x = [0.19, 0.12];
    assert!(smoothed_at(x) < 0.98 * riesz_potential(&k, &mu, &x));
}

// ----------------------------------------------------------------- capacities

#[test]
fn rescaled_witnesses_stay_feasible() {
    let k = kernel();
    let opts = SolverOptions::default();
    let mask = block_mask(3, 0.11, 0.13);
    let cap = cap_s_estimate(&k, &mask, &opts).unwrap();
    assert!(cap.residual.abs() <= 1e-6, "residual {}", cap.residual);
    assert!(cap.mass > 0.0);
    assert!(!cap.warning);

    // Independent feasibility audit at the contract probes: cell centers
    // and face midpoints, against the truncated radial energy.
    let h = mask.side();
    let r_max = 2.0 * mask.diameter();
    let points: Vec<f64> = (0..mask.len()).flat_map(|i| mask.center(i).to_vec()).collect();
    let mut probes: Vec<[f64; 2]> = Vec::new();
    for i in 0..mask.len() {
        let c = mask.center(i);
        probes.push([c[0], c[1]]);
        for t in 0..2 {
            for sgn in [-1.0, 1.0] {
                let mut p = [c[0], c[1]];
                p[t] += sgn * h / 2.0;
                probes.push(p);
            }
        }
    }
    for p in &probes {
        let val = wolff_potential(&k, &points, &cap.weights, p, h, r_max, None);
        assert!(
            val <= 1.0 + 1e-6,
            "witness infeasible at {p:?}: energy {val}"
        );
    }

    let gamma = gamma_plus_estimate(&k, &mask, &opts).unwrap();
    assert!(gamma.residual.abs() <= 1e-6, "residual {}", gamma.residual);
    assert!(gamma.mass > 0.0);
    assert!(!gamma.warning);
    println!(
        "cap mass {:.6} (gap {:.2e}), gamma mass {:.6} (gap {:.2e})",
        cap.mass, cap.refinement_gap, gamma.mass, gamma.refinement_gap
    );
}

#[test]
fn capacity_grows_with_the_set() {
    let k = kernel();
    let opts = SolverOptions::default();
    let small = block_mask(3, 0.11, 0.13);
    let large = block_mask(4, 0.11, 0.13);
    let cap_small = cap_s_estimate(&k, &small, &opts).unwrap().mass;
    let cap_large = cap_s_estimate(&k, &large, &opts).unwrap().mass;
    assert!(
        cap_small <= cap_large * 1.001,
        "radial-energy capacity not monotone: {cap_small} vs {cap_large}"
    );
    let g_small = gamma_plus_estimate(&k, &small, &opts).unwrap().mass;
    let g_large = gamma_plus_estimate(&k, &large, &opts).unwrap().mass;
    assert!(
        g_small <= g_large * 1.001,
        "field capacity not monotone: {g_small} vs {g_large}"
    );
    println!("cap {cap_small:.5} -> {cap_large:.5}, gamma {g_small:.5} -> {g_large:.5}");
}

#[test]
fn capacities_scale_with_the_dilation_power() {
    let k = kernel();
    let opts = SolverOptions::default();
    let base = block_mask(2, 0.11, 0.15);
    let doubled = base.scaled(2.0).unwrap();
    let factor = 2.0f64.powf(k.s);

    let c1 = cap_s_estimate(&k, &base, &opts).unwrap().mass;
    let c2 = cap_s_estimate(&k, &doubled, &opts).unwrap().mass;
    let cap_ratio = c2 / c1;
    assert!(
        (cap_ratio / factor - 1.0).abs() <= 0.02,
        "radial capacity dilation ratio {cap_ratio} vs {factor}"
    );

    let g1 = gamma_plus_estimate(&k, &base, &opts).unwrap().mass;
    let g2 = gamma_plus_estimate(&k, &doubled, &opts).unwrap().mass;
    let gamma_ratio = g2 / g1;
    assert!(
        (gamma_ratio / factor - 1.0).abs() <= 0.02,
        "field capacity dilation ratio {gamma_ratio} vs {factor}"
    );
    println!("dilation ratios: cap {cap_ratio:.6}, gamma {gamma_ratio:.6}, target {factor:.6}");
}

#[test]
fn single_cell_field_capacity_follows_the_refinement_power_law() {
    let k = kernel();
    let opts = SolverOptions::default();
    let mut lnh = Vec::new();
    let mut lng = Vec::new();
    for exp in 2..=6 {
        let h = 0.5f64.powi(exp);
        let mask = CompactSetMask::new(2, vec![0.3, -0.2], h).unwrap();
        let g = gamma_plus_estimate(&k, &mask, &opts).unwrap();
        assert!(g.mass > 0.0);
        lnh.push(h.ln());
        lng.push(g.mass.ln());
    }
    let fitted = slope(&lnh, &lng);
    assert!(
        (fitted - k.s).abs() <= 0.2,
        "single-cell exponent {fitted} should be near {}",
        k.s
    );
    println!("single-cell field capacity exponent {fitted:.4}");
}

#[test]
fn segment_capacity_vanishes_under_refinement() {
    let k = kernel();
    let opts = SolverOptions::default();
    let mut lnh = Vec::new();
    let mut lnw = Vec::new();
    let mut prev = f64::INFINITY;
    for exp in 3..=6 {
        let h = 0.5f64.powi(exp);
        let mask = segment_mask(1 << exp, h);
        let cap = cap_s_estimate(&k, &mask, &opts).unwrap();
        assert!(
            cap.mass < prev,
            "segment capacity must shrink with h, got {} after {prev}",
            cap.mass
        );
        prev = cap.mass;
        lnh.push(h.ln());
        lnw.push(cap.mass.ln());
    }
    let rate = slope(&lnh, &lnw);
    // A one-dimensional pile has mass profile ~ 2 r W inside the covered
    // interval, so the radial energy forces W ~ h^{s-1}.
    assert!(
        (rate - (k.s - 1.0)).abs() <= 0.2,
        "segment decay exponent {rate} should be near {}",
        k.s - 1.0
    );
    println!("segment capacity decay exponent {rate:.4}");
}

#[test]
fn solid_square_capacity_stays_bounded_under_refinement() {
    let k = kernel();
    let opts = SolverOptions::default();
    let mut masses = Vec::new();
    for n in [2usize, 4, 8] {
        let h = 1.0 / n as f64;
        let mut centers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                centers.push((i as f64 + 0.5) * h);
                centers.push((j as f64 + 0.5) * h);
            }
        }
        let mask = CompactSetMask::new(2, centers, h).unwrap();
        masses.push(cap_s_estimate(&k, &mask, &opts).unwrap().mass);
    }
    let lo = masses.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = masses.iter().cloned().fold(0.0f64, f64::max);
    assert!(
        lo >= 0.4 * hi,
        "square capacity should stay bounded below under refinement, got {masses:?}"
    );
    println!("square capacities under refinement: {masses:?}");
}

#[test]
fn the_two_capacities_stay_comparable() {
    let k = kernel();
    let opts = SolverOptions::default();
    let masks = vec![
        CompactSetMask::new(2, vec![0.0, 0.0], 0.25).unwrap(),
        block_mask(2, 0.11, 0.15),
        segment_mask(8, 0.125),
    ];
    let mut ratios = Vec::new();
    for mask in &masks {
        let c = cap_s_estimate(&k, &mask, &opts).unwrap().mass;
        let g = gamma_plus_estimate(&k, &mask, &opts).unwrap().mass;
        assert!(c > 0.0 && g > 0.0);
        ratios.push(g / c);
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0f64, f64::max);
    assert!(
        hi / lo <= 20.0,
        "capacity ratios drifted apart: {ratios:?}"
    );
    println!("gamma/cap ratios: {ratios:?}");
}

// ------------------------------------------------------------ max principle

struct PrincipleInstance {
    nu: DiscreteMeasure,
    f: Vec<f64>,
    field: Vec<f64>,
    mu: DiscreteMeasure,
}

/// Smooth positive density and a smooth bounded vector density on a
/// uniform n-by-n grid, with a small far ring as the comparison measure.
fn principle_instance(n: usize) -> PrincipleInstance {
    let nu = uniform_cube(2, n).unwrap();
    let mut f = Vec::with_capacity(nu.len());
    let mut field = Vec::with_capacity(2 * nu.len());
    for i in 0..nu.len() {
        let p = nu.point(i);
        let (x, y) = (p[0], p[1]);
        f.push(1.0 + 0.5 * (2.0 * std::f64::consts::PI * x).sin() * (std::f64::consts::PI * y).cos());
        field.push(0.4 * (std::f64::consts::PI * x).cos());
        field.push(0.3 * (2.0 * std::f64::consts::PI * y).sin());
    }
    let m = 10;
    let mut pts = Vec::new();
    let mut w = Vec::new();
    for j in 0..m {
        let angle = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
        pts.push(0.5 + 1.4 * angle.cos());
        pts.push(0.5 + 1.4 * angle.sin());
        w.push(0.05);
    }
    let mu = DiscreteMeasure::new(2, pts, w, 0.02).unwrap();
    PrincipleInstance { nu, f, field, mu }
}

#[test]
fn off_support_values_respect_the_support_sup() {
    let k = kernel();
    let inst = principle_instance(16);
    let report = max_principle_check(
        &k,
        &inst.nu,
        &inst.f,
        &inst.field,
        &inst.mu,
        0.12,
        1.5,
        0.45 / 16.0,
    )
    .unwrap();
    assert!(report.sup_support > 0.0, "instance should be nontrivial");
    assert!(
        report.violation_margin <= 0.05 * report.sup_support,
        "margin {} too large against support sup {}",
        report.violation_margin,
        report.sup_support
    );
    println!(
        "sup_global {:.6}, sup_support {:.6}, margin {:.2e} over {} samples",
        report.sup_global, report.sup_support, report.violation_margin, report.grid_points
    );
}

#[test]
fn principle_margin_at_least_halves_when_the_grid_halves() {
    let k = kernel();
    let mut margins = Vec::new();
    for n in [12usize, 24] {
        let inst = principle_instance(n);
        let report = max_principle_check(
            &k,
            &inst.nu,
            &inst.f,
            &inst.field,
            &inst.mu,
            0.12,
            1.5,
            0.45 / n as f64,
        )
        .unwrap();
        margins.push(report.violation_margin);
    }
    assert!(
        margins[1] <= 0.5 * margins[0] + 1e-12,
        "margin sequence {margins:?} did not contract"
    );
    println!("margins under refinement: {margins:?}");
}

// -------------------------------------------------------------- variational

fn variational_instance(n: usize, config: VariationalConfig) -> VariationalProblem {
    let k = kernel();
    let nu = uniform_cube(2, n).unwrap();
    let m = 10;
    let mut pts = Vec::new();
    let mut w = Vec::new();
    for j in 0..m {
        let angle = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
        pts.push(0.5 + 1.6 * angle.cos());
        pts.push(0.5 + 1.6 * angle.sin());
        w.push(0.08);
    }
    let mu = DiscreteMeasure::new(2, pts, w, 0.02).unwrap();
    VariationalProblem::new(&k, &nu, &mu, config).unwrap()
}

#[test]
fn descent_beats_the_full_density_and_keeps_core_mass() {
    let config = VariationalConfig {
        tau: 0.02,
        lambda_reg: 5e-4,
        step: 0.05,
        max_iter: 120,
        tol: 1e-10,
        ..VariationalConfig::default()
    };
    let problem = variational_instance(10, config);
    let out = minimize_functional(&problem).unwrap();
    assert!(out.baseline.is_finite());
    // The instance has genuine defect at full density, so descent must move.
    assert!(
        out.objective < out.baseline,
        "no progress: {} vs baseline {}",
        out.objective,
        out.baseline
    );
    assert!(out.core_mass > 0.0);
    for w in out.trace.windows(2) {
        assert!(w[1] <= w[0], "trace must be non-increasing: {w:?}");
    }
    assert!(out.a.iter().all(|&v| (0.0..=1.0).contains(&v)));
    assert!(
        out.first_variation_sup <= out.baseline_first_variation_sup + 1e-9,
        "first variation should relax: {} vs {}",
        out.first_variation_sup,
        out.baseline_first_variation_sup
    );
    println!(
        "objective {:.6} -> {:.6} in {} steps, first variation {:.4} -> {:.4} (9 lambda = {:.4})",
        out.baseline,
        out.objective,
        out.iterations,
        out.baseline_first_variation_sup,
        out.first_variation_sup,
        out.nine_lambda
    );
}

#[test]
fn functional_value_matches_its_definition_at_full_density() {
    let config = VariationalConfig::default();
    let problem = variational_instance(6, config);
    let ones = vec![1.0; problem.len()];
    let value = problem.functional_value(&ones).unwrap();
    assert!(value.is_finite() && value > 0.0);
    // Densities outside [0,1] and the empty density follow the contract.
    let mut bad = ones.clone();
    bad[0] = 1.2;
    assert!(problem.functional_value(&bad).is_err());
    let zeros = vec![0.0; problem.len()];
    assert!(problem.functional_value(&zeros).unwrap().is_infinite());
}

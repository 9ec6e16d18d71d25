use std::f64::consts::PI;

use rieszlab_kernels::{adaptive_simpson, poisson_kernel};
use rieszlab_measure::KernelParams;

/// Radial reduction of the d-dimensional integral of the Poisson kernel,
/// independent of the kernel's internal constants: sphere areas and
/// Gamma(d/2) are hardcoded literals, the endpoint singularity at |x| = r is
/// flattened by the substitution rho^2 = r^2 + u^2 with the leading
/// u^{1-alpha} piece integrated analytically below u0.
fn poisson_total_mass(d: usize, alpha: f64, r: f64) -> f64 {
    let k = KernelParams::new(d, d as f64 + 1.0 - alpha).unwrap();
    let (sphere_area, gamma_d_half) = match d {
        2 => (2.0 * PI, 1.0),
        3 => (4.0 * PI, 0.886_226_925_452_758_1),
        _ => unreachable!("only d = 2, 3 exercised here"),
    };
    let c = gamma_d_half * PI.powf(-(d as f64 / 2.0 + 1.0)) * (PI * alpha / 2.0).sin();
    let u0 = 1e-4 * r;
    // Tail beyond u_top is below c r^alpha u_top^{-alpha}/alpha ~ 1e-10.
    let u_top = r * 10f64.powf(10.0 / alpha);
    let head = c
        * r.powf(alpha - 2.0)
        * (u0.powf(2.0 - alpha) / (2.0 - alpha)
            - u0.powf(4.0 - alpha) / ((4.0 - alpha) * r * r));
    let mut integrand = |t: f64| {
        let u = t.exp();
        let rho = (r * r + u * u).sqrt();
        let mut x = vec![0.0; d];
        x[0] = rho;
        let p = poisson_kernel(&k, r, &x).unwrap();
        p * rho.powi(d as i32 - 2) * u * u
    };
    let body = adaptive_simpson(&mut integrand, u0.ln(), u_top.ln(), 1e-11);
    sphere_area * (head + body)
}

#[test]
fn unit_mass_across_dimensions_orders_and_radii() {
    for d in [2usize, 3] {
        for alpha in [1.3, 1.7] {
            for r in [0.5, 1.0, 2.0] {
                let total = poisson_total_mass(d, alpha, r);
                assert!(
                    (total - 1.0).abs() <= 1e-3,
                    "d={d} alpha={alpha} r={r}: integral {total}"
                );
            }
        }
    }
}

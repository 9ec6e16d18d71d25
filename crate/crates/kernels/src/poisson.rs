use std::f64::consts::PI;

use rieszlab_measure::KernelParams;

use crate::KernelError;

/// Gamma(n/2) for integer n >= 1, by the recursion from Gamma(1/2) = sqrt(pi)
/// and Gamma(1) = 1. Exact up to rounding for every half-integer argument.
pub fn gamma_half(n: u32) -> f64 {
    assert!(n >= 1, "gamma_half needs a positive half-integer argument");
    let (mut x, mut val) = if n % 2 == 1 {
        (0.5, PI.sqrt())
    } else {
        (1.0, 1.0)
    };
    while 2.0 * x < n as f64 {
        val *= x;
        x += 1.0;
    }
    val
}

/// The alpha-Poisson kernel of the ball B(0,r):
/// P(x) = Gamma(d/2) pi^{-(d/2+1)} sin(pi alpha/2) r^alpha (|x|^2-r^2)^{-alpha/2} |x|^{-d}
/// for |x| > r, and 0 inside the ball. On the sphere |x| = r the value is
/// +infinity, reported as an error.
pub fn poisson_kernel(k: &KernelParams, r: f64, x: &[f64]) -> Result<f64, KernelError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(KernelError::InvalidInput(format!(
            "ball radius must be a positive real, got {r}"
        )));
    }
    if x.len() != k.d {
        return Err(KernelError::InvalidInput(format!(
            "point dimension {} does not match kernel dimension {}",
            x.len(),
            k.d
        )));
    }
    let t2: f64 = x.iter().map(|v| v * v).sum();
    let r2 = r * r;
    if t2 < r2 {
        return Ok(0.0);
    }
    if t2 == r2 {
        return Err(KernelError::PoissonBoundary);
    }
    let d = k.d as f64;
    let c = gamma_half(k.d as u32) * PI.powf(-(d / 2.0 + 1.0)) * (PI * k.alpha / 2.0).sin();
    Ok(c * r.powf(k.alpha) * (t2 - r2).powf(-k.alpha / 2.0) * t2.powf(-d / 2.0))
}

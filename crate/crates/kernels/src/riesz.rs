use rieszlab_measure::{dist2, KernelParams};

use crate::KernelError;

/// K(x) = x/|x|^{s+1}.
pub fn riesz_kernel(k: &KernelParams, x: &[f64]) -> Result<Vec<f64>, KernelError> {
    let n2: f64 = x.iter().map(|v| v * v).sum();
    if n2 == 0.0 {
        return Err(KernelError::Singularity);
    }
    let scale = n2.powf(-(k.s + 1.0) / 2.0);
    Ok(x.iter().map(|v| v * scale).collect())
}

/// k_alpha(x) = |x|^{-(s-1)}, the scalar alpha-Riesz kernel.
pub fn alpha_riesz_kernel(k: &KernelParams, x: &[f64]) -> Result<f64, KernelError> {
    let n2: f64 = x.iter().map(|v| v * v).sum();
    if n2 == 0.0 {
        return Err(KernelError::Singularity);
    }
    Ok(n2.powf(-(k.s - 1.0) / 2.0))
}

/// Kernel of the potential G_A: 1/(A |x-y|^{s-1}).
pub fn g_kernel(k: &KernelParams, a: f64, x: &[f64], y: &[f64]) -> Result<f64, KernelError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(KernelError::InvalidInput(format!(
            "potential scale A must be a positive real, got {a}"
        )));
    }
    let n2 = dist2(x, y);
    if n2 == 0.0 {
        return Err(KernelError::Singularity);
    }
    Ok(n2.powf(-(k.s - 1.0) / 2.0) / a)
}

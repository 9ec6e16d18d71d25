use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use rieszlab_measure::KernelParams;

use crate::TransformError;

/// Periodic computation box for the psi construction. The box is centered on
/// the reference triple [-1, 2]^d (center 0.5 per axis), and must be large
/// enough that both the source cutoff and the slowly decaying tail of psi
/// fit without wrapping onto themselves.
#[derive(Clone, Debug)]
pub struct PsiConfig {
    /// Grid nodes per axis.
    pub nodes: usize,
    /// Side of the periodic box, in the same units as the unit lattice cube.
    pub length: f64,
    /// Cap on boundary-ring |psi| relative to its global maximum.
    pub leak_tol: f64,
}

impl Default for PsiConfig {
    fn default() -> Self {
        PsiConfig {
            nodes: 256,
            length: 12.0,
            leak_tol: 0.05,
        }
    }
}

/// A vector field psi with adjoint-transform field R*(psi m_d), both sampled
/// on the periodic grid. psi is stored with the d components of each point
/// adjacent; indexing is row-major over axes.
#[derive(Clone, Debug)]
pub struct PsiFunction {
    pub d: usize,
    pub nodes: usize,
    pub spacing: f64,
    /// First cell center per axis.
    pub origin: Vec<f64>,
    pub psi: Vec<f64>,
    pub field: Vec<f64>,
    /// Calibrated multiplier constant.
    pub b: f64,
    /// Boundary-ring |psi| over the global maximum, after calibration.
    pub leakage: f64,
}

impl PsiFunction {
    pub fn len(&self) -> usize {
        self.field.len()
    }

    pub fn is_empty(&self) -> bool {
        self.field.is_empty()
    }

    pub fn point(&self, mut idx: usize) -> Vec<f64> {
        let mut coords = vec![0.0; self.d];
        for j in (0..self.d).rev() {
            coords[j] = self.origin[j] + (idx % self.nodes) as f64 * self.spacing;
            idx /= self.nodes;
        }
        coords
    }

    pub fn psi_at(&self, idx: usize) -> &[f64] {
        &self.psi[idx * self.d..(idx + 1) * self.d]
    }
}

/// One-dimensional profile of the source cutoff: identically 1 on [-1, 2],
/// smoothly falling to 0 outside (-2.5, 3.5), with all derivatives vanishing
/// at the seams.
fn cutoff_profile(x: f64) -> f64 {
    fn ramp(t: f64) -> f64 {
        // exp(-1/t) smoothstep: 0 at t <= 0, 1 at t >= 1.
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            1.0
        } else {
            let a = (-1.0 / t).exp();
            let b = (-1.0 / (1.0 - t)).exp();
            a / (a + b)
        }
    }
    if x < -1.0 {
        ramp((x + 2.5) / 1.5)
    } else if x > 2.0 {
        ramp((3.5 - x) / 1.5)
    } else {
        1.0
    }
}

fn fft_nd(data: &mut [Complex<f64>], nodes: usize, d: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(nodes)
    } else {
        planner.plan_fft_forward(nodes)
    };
    let total = data.len();
    let mut line = vec![Complex::new(0.0, 0.0); nodes];
    for axis in 0..d {
        let stride = nodes.pow((d - 1 - axis) as u32);
        let lines = total / nodes;
        for l in 0..lines {
            // Base offset of line l along this axis.
            let block = stride * nodes;
            let base = (l / stride) * block + (l % stride);
            for i in 0..nodes {
                line[i] = data[base + i * stride];
            }
            fft.process(&mut line);
            for i in 0..nodes {
                data[base + i * stride] = line[i];
            }
        }
    }
    if inverse {
        let scale = 1.0 / total as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Build psi from its Fourier-side definition: psi_hat is the vector symbol
/// xi |xi|^{d-1-s} applied to the transform of the cutoff, scaled so the
/// adjoint transform of psi against Lebesgue measure reproduces the cutoff.
/// The scale is measured, not transcribed: the adjoint field is evaluated by
/// convolving psi with spatial samples of the kernel, and the constant is a
/// least-squares fit of that field to 1 over [-1, 2]^d.
///
/// Everything is periodic, so the construction is honest only when the box
/// dwarfs both the cutoff support and the psi tail; the leakage check
/// enforces that and fails the run otherwise.
pub fn psi_function(k: &KernelParams, config: &PsiConfig) -> Result<PsiFunction, TransformError> {
    let n = config.nodes;
    let d = k.d;
    let l = config.length;
    if n < 16 || n % 2 != 0 {
        return Err(TransformError::InvalidParams(format!(
            "grid nodes per axis must be even and at least 16, got {n}"
        )));
    }
    if !(l > 0.0) || !l.is_finite() || !(config.leak_tol > 0.0) {
        return Err(TransformError::InvalidParams(format!(
            "box side and leakage tolerance must be positive, got {l} and {}",
            config.leak_tol
        )));
    }
    if l <= 7.0 {
        return Err(TransformError::Leakage(format!(
            "a box of side {l} cannot hold the source cutoff (support side 6) with any margin"
        )));
    }
    let total = n.pow(d as u32);
    if total.checked_mul(d).is_none() || total > 1 << 28 {
        return Err(TransformError::TooLarge(format!(
            "{n} nodes per axis in dimension {d} is beyond the dense grid budget"
        )));
    }
    let spacing = l / n as f64;
    let origin: Vec<f64> = (0..d).map(|_| 0.5 - l / 2.0 + spacing / 2.0).collect();

    // Transform of the source cutoff.
    let mut f_hat: Vec<Complex<f64>> = (0..total)
        .map(|idx| {
            let mut rest = idx;
            let mut v = 1.0;
            for j in (0..d).rev() {
                let x = origin[j] + (rest % n) as f64 * spacing;
                v *= cutoff_profile(x);
                rest /= n;
            }
            Complex::new(v, 0.0)
        })
        .collect();
    fft_nd(&mut f_hat, n, d, false);

    // Apply the vector symbol per component and invert.
    let mut psi = vec![0.0f64; total * d];
    let mut psi_hats: Vec<Vec<Complex<f64>>> = Vec::with_capacity(d);
    let freq = |c: usize| -> f64 {
        let signed = if c <= n / 2 { c as isize } else { c as isize - n as isize };
        2.0 * std::f64::consts::PI * signed as f64 / l
    };
    for t in 0..d {
        let mut comp = vec![Complex::new(0.0, 0.0); total];
        for idx in 0..total {
            let mut rest = idx;
            let mut xi = vec![0.0f64; d];
            let mut nyquist = false;
            for j in (0..d).rev() {
                let c = rest % n;
                if c == n / 2 {
                    nyquist = true;
                }
                xi[j] = freq(c);
                rest /= n;
            }
            if nyquist {
                continue;
            }
            let norm2: f64 = xi.iter().map(|v| v * v).sum();
            if norm2 == 0.0 {
                continue;
            }
            let radial = norm2.powf((d as f64 - 1.0 - k.s) / 2.0);
            // i * xi_t |xi|^{d-1-s} f_hat.
            comp[idx] = Complex::new(0.0, xi[t] * radial) * f_hat[idx];
        }
        psi_hats.push(comp.clone());
        fft_nd(&mut comp, n, d, true);
        for idx in 0..total {
            psi[idx * d + t] = comp[idx].re;
        }
    }

    // Adjoint field by cyclic convolution against spatial kernel samples.
    // The kernel enters as raw samples of x/|x|^{s+1}, so the calibration
    // below is a real measurement rather than a constant transcription.
    let mut field_hat = vec![Complex::new(0.0, 0.0); total];
    for t in 0..d {
        let mut ker: Vec<Complex<f64>> = (0..total)
            .map(|idx| {
                let mut rest = idx;
                let mut delta = vec![0.0f64; d];
                for j in (0..d).rev() {
                    let c = rest % n;
                    let mut off = c as f64 * spacing;
                    if off > l / 2.0 {
                        off -= l;
                    }
                    delta[j] = off;
                    rest /= n;
                }
                let r2: f64 = delta.iter().map(|v| v * v).sum();
                if r2 == 0.0 {
                    Complex::new(0.0, 0.0)
                } else {
                    Complex::new(
                        delta[t] * r2.powf(-(k.s + 1.0) / 2.0) * spacing.powi(d as i32),
                        0.0,
                    )
                }
            })
            .collect();
        fft_nd(&mut ker, n, d, false);
        for idx in 0..total {
            field_hat[idx] += ker[idx] * psi_hats[t][idx];
        }
    }
    fft_nd(&mut field_hat, n, d, true);

    // Least-squares scale against 1 over the probe region [-1, 2]^d.
    let mut num = 0.0;
    let mut den = 0.0;
    for idx in 0..total {
        let mut rest = idx;
        let mut inside = true;
        for j in (0..d).rev() {
            let c = rest % n;
            let x = origin[j] + c as f64 * spacing;
            if !(-1.0..=2.0).contains(&x) {
                inside = false;
            }
            rest /= n;
        }
        if inside {
            num += field_hat[idx].re;
            den += field_hat[idx].re * field_hat[idx].re;
        }
    }
    if den <= 0.0 {
        return Err(TransformError::InvalidParams(
            "adjoint field vanished over the probe region; the grid cannot resolve the kernel"
                .into(),
        ));
    }
    let b = num / den;
    for v in psi.iter_mut() {
        *v *= b;
    }
    let field: Vec<f64> = field_hat.iter().map(|v| v.re * b).collect();

    // Leakage: psi magnitude on the outermost ring against the global max.
    let mut ring_max = 0.0f64;
    let mut global_max = 0.0f64;
    for idx in 0..total {
        let mag2: f64 = (0..d).map(|t| psi[idx * d + t] * psi[idx * d + t]).sum();
        let mut rest = idx;
        let mut boundary = false;
        for _ in 0..d {
            let c = rest % n;
            if c == 0 || c == n - 1 {
                boundary = true;
            }
            rest /= n;
        }
        global_max = global_max.max(mag2);
        if boundary {
            ring_max = ring_max.max(mag2);
        }
    }
    let leakage = if global_max > 0.0 {
        (ring_max / global_max).sqrt()
    } else {
        0.0
    };
    if leakage > config.leak_tol {
        return Err(TransformError::Leakage(format!(
            "boundary-ring psi is {leakage:.3e} of its peak, above the allowed {:.3e}; \
             enlarge the box",
            config.leak_tol
        )));
    }

    Ok(PsiFunction {
        d,
        nodes: n,
        spacing,
        origin,
        psi,
        field,
        b,
        leakage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_is_one_on_the_core_and_vanishes_outside() {
        assert_eq!(cutoff_profile(-1.0), 1.0);
        assert_eq!(cutoff_profile(0.3), 1.0);
        assert_eq!(cutoff_profile(2.0), 1.0);
        assert_eq!(cutoff_profile(-2.5), 0.0);
        assert_eq!(cutoff_profile(3.5), 0.0);
        assert_eq!(cutoff_profile(-4.0), 0.0);
        let mid = cutoff_profile(-1.75);
        assert!(mid > 0.0 && mid < 1.0);
    }

    #[test]
    fn tiny_boxes_are_rejected() {
        let k = KernelParams::new(2, 1.5).unwrap();
        let config = PsiConfig {
            nodes: 64,
            length: 6.0,
            leak_tol: 0.05,
        };
        assert!(matches!(
            psi_function(&k, &config),
            Err(TransformError::Leakage(_))
        ));
    }
}

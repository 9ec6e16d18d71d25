use rieszlab_measure::{dist, dist2, Ball, KernelParams};

use crate::KernelError;

/// The suppression function of an open set Omega given as a union of open
/// balls: Phi(x) = dist(x, complement of Omega), floored at delta.
///
/// For a union of balls, max_i (r_i - |x - c_i|)_+ is 1-Lipschitz, vanishes
/// exactly off the union, and equals the true distance wherever a single ball
/// determines it; where balls overlap it is a lower bound, which only makes
/// the suppression weaker (a stronger kernel, so every kernel upper bound
/// still attains).
#[derive(Clone, Debug)]
pub struct SuppressionField {
    balls: Vec<Ball>,
    delta_floor: f64,
}

impl SuppressionField {
    pub fn new(balls: Vec<Ball>, delta_floor: f64) -> Result<Self, KernelError> {
        if !(delta_floor >= 0.0) || !delta_floor.is_finite() {
            return Err(KernelError::InvalidInput(format!(
                "suppression floor must be a finite non-negative real, got {delta_floor}"
            )));
        }
        for b in &balls {
            if !(b.radius > 0.0) || !b.radius.is_finite() {
                return Err(KernelError::InvalidInput(format!(
                    "suppression ball has non-positive radius {}",
                    b.radius
                )));
            }
            if b.center.iter().any(|c| !c.is_finite()) {
                return Err(KernelError::InvalidInput(
                    "suppression ball center is not finite".into(),
                ));
            }
        }
        Ok(SuppressionField { balls, delta_floor })
    }

    pub fn empty() -> Self {
        SuppressionField {
            balls: Vec::new(),
            delta_floor: 0.0,
        }
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn delta_floor(&self) -> f64 {
        self.delta_floor
    }

    /// Distance to the complement of the ball union: max_i (r_i - |x-c_i|)_+.
    pub fn phi(&self, x: &[f64]) -> f64 {
        self.balls
            .iter()
            .map(|b| (b.radius - dist(&b.center, x)).max(0.0))
            .fold(0.0, f64::max)
    }

    pub fn phi_delta(&self, x: &[f64]) -> f64 {
        self.phi(x).max(self.delta_floor)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.balls.iter().any(|b| b.contains_open(x))
    }
}

/// K_Phi(x,y) = (x-y) / (|x-y|^2 + Phi_delta(x) Phi_delta(y))^{(s+1)/2}.
///
/// Exactly antisymmetric: both the squared distance and the suppression
/// product are symmetric expressions, so swapping the arguments negates only
/// the numerator.
pub fn suppressed_kernel(
    k: &KernelParams,
    field: &SuppressionField,
    x: &[f64],
    y: &[f64],
) -> Result<Vec<f64>, KernelError> {
    let d2 = dist2(x, y);
    let pp = field.phi_delta(x) * field.phi_delta(y);
    let denom2 = d2 + pp;
    if denom2 == 0.0 {
        return Err(KernelError::Singularity);
    }
    let scale = denom2.powf(-(k.s + 1.0) / 2.0);
    Ok(x.iter().zip(y).map(|(a, b)| (a - b) * scale).collect())
}

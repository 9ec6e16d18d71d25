use serde::{Deserialize, Serialize};

use crate::MeasureError;

/// Exponent bundle for the codimension-below-one regime: dimension `d >= 2`,
/// smoothness `s` strictly between `d - 1` and `d`, and the derived index
/// `alpha = d - s + 1`, always in `(1, 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKernelParams")]
pub struct KernelParams {
    pub d: usize,
    pub s: f64,
    pub alpha: f64,
}

#[derive(Deserialize)]
struct RawKernelParams {
    d: usize,
    s: f64,
}

impl TryFrom<RawKernelParams> for KernelParams {
    type Error = MeasureError;

    fn try_from(raw: RawKernelParams) -> Result<Self, Self::Error> {
        KernelParams::new(raw.d, raw.s)
    }
}

impl KernelParams {
    pub fn new(d: usize, s: f64) -> Result<Self, MeasureError> {
        if d < 2 {
            return Err(MeasureError::InvalidParams(format!(
                "dimension must be at least 2, got {d}"
            )));
        }
        let dd = d as f64;
        if !s.is_finite() || s <= dd - 1.0 || s >= dd {
            return Err(MeasureError::InvalidParams(format!(
                "s must lie strictly between d-1 = {} and d = {}, got {s}",
                dd - 1.0,
                dd
            )));
        }
        Ok(KernelParams {
            d,
            s,
            alpha: dd - s + 1.0,
        })
    }
}

//! Riesz transform operators on discrete measures: truncated transforms,
//! bilinear pairings, operator-norm scans, the Lipschitz oscillation
//! coefficient, the Fourier-side psi function, and measure smoothing.
//!
//! All pair sums exclude the diagonal and drop pairs closer than the
//! measure's resolution; the dropped count is surfaced where it matters.

mod error;
mod linprog;
mod mollify;
mod norm;
mod oscillation;
mod pairing;
mod psi;

pub use error::TransformError;
pub use linprog::{simplex_maximize, LinearProgram};
pub use mollify::mollify;
pub use norm::{operator_norm, operator_norm_with, NormConfig, NormScan};
pub use oscillation::{lipschitz_oscillation, riesz_system_check, OscillationResult};
pub use pairing::{
    adjoint_riesz, bilinear_form, reflectionless_defect, truncated_riesz, BilinearPairing,
};
pub use psi::{psi_function, PsiConfig, PsiFunction};

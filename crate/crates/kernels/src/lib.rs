//! Pointwise kernels of the s-Riesz family.
//!
//! The vector kernel K(x) = x/|x|^{s+1}, its suppressed variants damped near
//! an open set, the scalar kernel k_alpha(x) = |x|^{-(s-1)}, the alpha-Poisson
//! kernel of a ball, and the potential kernel 1/(A|x-y|^{s-1}). All functions
//! are pure; singular inputs return errors rather than infinities.

mod error;
mod poisson;
mod quad;
mod riesz;
mod suppression;

pub use error::KernelError;
pub use poisson::{gamma_half, poisson_kernel};
pub use quad::adaptive_simpson;
pub use riesz::{alpha_riesz_kernel, g_kernel, riesz_kernel};
pub use suppression::{suppressed_kernel, SuppressionField};

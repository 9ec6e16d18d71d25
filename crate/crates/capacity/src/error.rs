use rieszlab_kernels::KernelError;
use rieszlab_measure::MeasureError;
use rieszlab_transforms::TransformError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CapacityError {
    #[error("invalid capacity parameters: {0}")]
    InvalidParams(String),
    #[error("weights outside the admissible box: {0}")]
    BadWeights(String),
    #[error("minimization diverged after {} accepted steps: {message}", trace.len())]
    Diverged { message: String, trace: Vec<f64> },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

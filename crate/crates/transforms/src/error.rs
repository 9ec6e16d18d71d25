use thiserror::Error;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("invalid transform parameters: {0}")]
    InvalidParams(String),
    #[error("test function is not mean-zero: {0}")]
    NotMeanZero(String),
    #[error("point cloud too large: {0}")]
    TooLarge(String),
    #[error("grid too small (leakage check fails): {0}")]
    Leakage(String),
    #[error(transparent)]
    Kernel(#[from] rieszlab_kernels::KernelError),
    #[error(transparent)]
    Measure(#[from] rieszlab_measure::MeasureError),
}

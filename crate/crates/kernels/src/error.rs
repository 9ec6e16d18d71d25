use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("kernel singularity")]
    Singularity,
    #[error("poisson kernel is +infinity on the sphere |x| = r")]
    PoissonBoundary,
    #[error("invalid kernel input: {0}")]
    InvalidInput(String),
}

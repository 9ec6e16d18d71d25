use rieszlab_kernels::KernelError;
use rieszlab_lattice::LatticeError;
use rieszlab_measure::MeasureError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SelectionError {
    #[error("invalid selection parameters: {0}")]
    InvalidParams(String),
    #[error("window cannot certify selection: {0}")]
    WindowMargin(String),
    #[error(
        "doubling scan failed: mass grew by a factor {growth:.3e} across the sweep; \
         the selection parameters are outside their working regime"
    )]
    DoublingScanFailed { growth: f64 },
    #[error("no shell available for the cube at generation {generation}")]
    MissingShell { generation: i32 },
    #[error("bunch members must have pairwise disjoint B-enlargements")]
    OverlappingBunch,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

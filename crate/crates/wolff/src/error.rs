use rieszlab_lattice::LatticeError;
use rieszlab_measure::MeasureError;
use rieszlab_selection::SelectionError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WolffError {
    #[error("invalid energy parameters: {0}")]
    InvalidParams(String),
    #[error("window not covering support: {0}")]
    WindowCoverage(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Selection(#[from] SelectionError),
}

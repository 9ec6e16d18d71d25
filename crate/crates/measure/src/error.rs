use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// The doubling-index scan is only defined when the starting ball carries
    /// mass; scanning from an empty ball would succeed vacuously at k = 0.
    #[error("no doubling index defined: {0}")]
    NoDoublingIndex(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed measure file: {0}")]
    MalformedFile(String),
}

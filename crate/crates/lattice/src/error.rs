use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("degenerate window: {0}")]
    DegenerateWindow(String),

    #[error("generation {requested} outside window range [{g_min}, {g_max}]")]
    GenerationOutsideWindow {
        requested: i32,
        g_min: i32,
        g_max: i32,
    },

    #[error("window enumeration would produce about {estimate} cubes (cap {cap})")]
    EnumerationTooLarge { estimate: u128, cap: u128 },

    #[error("invalid lattice config: {0}")]
    InvalidConfig(String),
}

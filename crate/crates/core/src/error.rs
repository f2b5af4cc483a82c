use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Subdivision reached boxes far below the requested cluster size
    /// without certifying them.
    #[error("unresolvable region near {center} (box width {width})")]
    Unresolvable { center: String, width: String },

    #[error(
        "deflation stalled at {precision} bits; widest cluster at {center} with radius {radius}"
    )]
    DeflationStalled {
        precision: u32,
        center: String,
        radius: String,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("root iteration did not converge at {0} bits")]
    NoConvergence(u32),
}

pub type Result<T> = std::result::Result<T, Error>;

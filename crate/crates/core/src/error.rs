use thiserror::Error;

/// Errors produced by the game model, the criteria and the structured builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("capacity exceeded: {rows}x{cols} matrix is larger than the {cap} entry cap")]
    Capacity {
        rows: usize,
        cols: usize,
        cap: usize,
    },

    #[error("invalid strategy profile: {0}")]
    InvalidProfile(String),

    #[error("player {player} out of range 1..={players}")]
    PlayerOutOfRange { player: usize, players: usize },

    #[error("invalid player pair ({0}, {1})")]
    InvalidPair(usize, usize),

    #[error("unsupported game shape: {0}")]
    UnsupportedShape(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    /// The operation requires a potential game (or a valid potential) and the
    /// check failed; carries the offending residuals.
    #[error("precondition failed: {message} (max residual {max_residual:e})")]
    Precondition {
        message: String,
        max_residual: f64,
        residuals: Vec<f64>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

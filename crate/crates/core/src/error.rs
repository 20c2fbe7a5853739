//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("polynomials belong to different generator tables")]
    MixedTables,

    #[error("degree {needed} exceeds the truncation cap {cap}")]
    CapExceeded { needed: usize, cap: usize },

    #[error("basis size exceeds the cell budget of {budget} monomials")]
    CellBudget { budget: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("presentation is not minimal: {0}")]
    NotMinimal(String),

    #[error("not a cocycle: {0}")]
    NotCocycle(String),

    #[error("{0}")]
    Domain(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable tag used in the CLI's structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::UnknownGenerator(_) => "unknown_generator",
            Error::MixedTables => "mixed_tables",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::CellBudget { .. } => "cell_budget",
            Error::Dimension(_) => "dimension",
            Error::NotMinimal(_) => "not_minimal",
            Error::NotCocycle(_) => "not_cocycle",
            Error::Domain(_) => "domain",
            Error::Io(_) => "io",
        }
    }
}

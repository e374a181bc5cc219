use thiserror::Error;

use crate::expr::ExprError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown suite '{0}' (expected one of star, calculus, gauge, scalar, planewave, grid)")]
    UnknownSuite(String),

    #[error(transparent)]
    Core(#[from] nckit_core::Error),

    #[error(transparent)]
    Grid(#[from] nckit_grid::GridError),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, CliError>;

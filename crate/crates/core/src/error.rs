use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("theta matrix is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),

    #[error("theta entry ({0}, {1}) depends on variables other than t: {2}")]
    ThetaNotTimeOnly(usize, usize, String),

    #[error("{what} is not anti-selfadjoint (conj(p) != -p): {poly}")]
    NotAntiSelfadjoint { what: &'static str, poly: String },

    #[error("{what} must not depend on eps: {poly}")]
    EpsDependent { what: &'static str, poly: String },

    #[error("invalid plane-wave spec: {0}")]
    InvalidPlaneWave(String),
}

pub type Result<T> = std::result::Result<T, Error>;

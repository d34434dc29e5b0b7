use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown dimension `{0}`")]
    UnknownDimension(String),

    #[error("non-normalizable density: {0}")]
    NonNormalizable(String),

    #[error("grid too small: |psi0|^2 = {boundary_density:e} at the boundary exceeds {threshold:e}")]
    GridTooSmall { boundary_density: f64, threshold: f64 },

    #[error("ground-state solver did not converge after {iterations} iterations (best energy {best_energy})")]
    NotConverged {
        iterations: usize,
        best_energy: f64,
        best: Box<crate::groundstate::GroundStateSolution>,
    },

    #[error("path blow-up at step {step}: non-finite state")]
    PathBlowUp { step: usize },

    #[error("constant series: zero variance")]
    ConstantSeries,

    #[error("series too short: {0}")]
    SeriesTooShort(String),

    #[error("non-uniform lag spacing")]
    NonUniformLags,

    #[error("density not normalized: integral = {0}")]
    Unnormalized(f64),

    #[error("empty series")]
    EmptySeries,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),

    #[error("{0}")]
    Config(String),

    #[error("missing {file}: run the `{scenario}` scenario first")]
    MissingArtifact { file: String, scenario: &'static str },
}

impl Error {
    /// Process exit status: 2 for configuration problems, 3 for numerical
    /// failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParameter(_) | Error::UnknownDimension(_) | Error::MissingArtifact { .. } => 2,
            Error::Io(_) | Error::Format(_) => 1,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

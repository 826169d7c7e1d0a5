use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a precondition (bad mode, malformed density, out-of-range length, ...).
    #[error("invalid input: {0}")]
    Validation(String),

    /// A correlation matrix had an eigenvalue outside [0, 1] beyond the clamping tolerance.
    #[error("correlation matrix is not a contraction: eigenvalue {eigenvalue} outside [0, 1]")]
    NonContractive { eigenvalue: f64 },

    /// Quadrature failed to reach the requested accuracy.
    #[error("quadrature did not converge on [{lo}, {hi}]: achieved bound {achieved:e}, wanted {requested:e}")]
    Accuracy {
        lo: f64,
        hi: f64,
        achieved: f64,
        requested: f64,
    },

    /// A ladder band vanishes identically, so its ground state is not defined.
    #[error("band {band} vanishes identically; ground state is ill-defined")]
    DegenerateBand { band: usize },

    #[error("least-squares design is rank deficient: {0}")]
    RankDeficient(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Config(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_)
            | Error::DegenerateBand { .. }
            | Error::RankDeficient(_)
            | Error::Config(_) => 2,
            Error::NonContractive { .. } | Error::Accuracy { .. } => 3,
            Error::Io(_) => 1,
        }
    }
}

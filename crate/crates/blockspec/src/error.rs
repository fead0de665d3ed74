use serde::Serialize;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] blockspec_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid document: {0}")]
    Format(String),
    #[error("self-check failed: {0}")]
    CheckFailed(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable machine-readable category.
    pub fn kind(&self) -> &'static str {
        use blockspec_core::Error as E;
        match self {
            Error::Core(e) => match e {
                E::DimensionMismatch(_) => "dimension_mismatch",
                E::NonInvariant { .. } => "non_invariant",
                E::NotUnitary { .. } => "not_unitary",
                E::NotANumber { .. } => "not_a_number",
                E::InvalidParameter(_) => "invalid_parameter",
                E::NotSquare { .. } => "not_square",
                E::OutOfRange { .. } => "out_of_range",
                E::PositivityViolation { .. } => "positivity_violation",
                E::NotHermitian(_) => "not_hermitian",
                E::NoConvergence(..) => "no_convergence",
            },
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
            Error::Format(_) => "format",
            Error::CheckFailed(_) => "check_failed",
            Error::Usage(_) => "usage",
        }
    }

    /// Process exit status: 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Usage(_) => 2,
            _ => 1,
        }
    }

    /// The JSON object written to stderr on failure.
    pub fn report(&self) -> ErrorReport {
        ErrorReport {
            error: ErrorBody {
                kind: self.kind(),
                message: self.to_string(),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}

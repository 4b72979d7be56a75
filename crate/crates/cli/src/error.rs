use thiserror::Error;

/// Failures reported by the front-end, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed arguments, config, matrix or input files.
    #[error("parse error: {0}")]
    Parse(String),

    /// Inputs that parse but do not fit together.
    #[error("validation error: {0}")]
    Validation(String),

    /// Singular matrices, faces outside the feedback image, failed axiom checks.
    #[error("numeric error: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    /// Prefixes the message with the file it came from.
    pub fn in_file(self, path: &std::path::Path) -> Self {
        let wrap = |m: String| format!("{}: {m}", path.display());
        match self {
            CliError::Parse(m) => CliError::Parse(wrap(m)),
            CliError::Validation(m) => CliError::Validation(wrap(m)),
            CliError::Numeric(m) => CliError::Numeric(wrap(m)),
        }
    }
}

impl From<fscan::Error> for CliError {
    fn from(e: fscan::Error) -> Self {
        use fscan::Error as E;
        let msg = e.to_string();
        match e {
            E::Parse { .. } => CliError::Parse(msg),
            E::Singular { .. } | E::NotInFeedbackImage { .. } | E::NonFinite => {
                CliError::Numeric(msg)
            }
            E::DimensionMismatch { .. }
            | E::ShapeMismatch(_)
            | E::NonSquare { .. }
            | E::OutOfRange { .. }
            | E::EndpointMismatch { .. }
            | E::BoundaryMismatch { .. }
            | E::AlphabetMismatch
            | E::InvalidParameter(_) => CliError::Validation(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

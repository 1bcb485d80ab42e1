/// Failures mapped onto the documented exit codes.
#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<vedkit_core::LocalizationError> for CliError {
    fn from(e: vedkit_core::LocalizationError) -> Self {
        CliError::Verification(e.to_string())
    }
}

impl From<vedkit_core::stability::StabilityError> for CliError {
    fn from(e: vedkit_core::stability::StabilityError) -> Self {
        use vedkit_core::stability::StabilityError as E;
        match e {
            E::Localization(inner) => CliError::Verification(inner.to_string()),
            E::MalformedTable => CliError::Invariant(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<vedkit_homotopy::pathtrack::TrackError> for CliError {
    fn from(e: vedkit_homotopy::pathtrack::TrackError) -> Self {
        CliError::Verification(e.to_string())
    }
}

//! Error reporting with stable reason codes and exit statuses.

use std::path::Path;

/// Everything that ends a run unsuccessfully.
#[derive(Debug)]
pub enum CliError {
    Core(resonorm::Error),
    Input(String),
    Io(String),
    Verification(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    /// Machine-readable reason code.
    pub fn code(&self) -> &'static str {
        use resonorm::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::Structure(_) => "structure",
                E::Domain(_) => "domain",
                E::Degeneracy(_) => "degeneracy",
                E::Contract(_) => "contract",
                E::Parse(_) => "parse",
                E::NotAreaPreserving(_) => "not-area-preserving",
                E::OnBoundary(_) => "on-boundary",
            },
            CliError::Input(_) => "input",
            CliError::Io(_) => "io",
            CliError::Verification(_) => "verification",
        }
    }

    /// 1 for input errors, 2 for a failed normalization hypothesis, 3 for a
    /// failed verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(resonorm::Error::Degeneracy(_)) => 2,
            CliError::Verification(_) => 3,
            _ => 1,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Input(m) | CliError::Io(m) | CliError::Verification(m) => m.clone(),
        }
    }

    /// One line: `error code=<code> exit=<status> message="<text>"`.
    pub fn report(&self) -> String {
        format!("error code={} exit={} message={:?}", self.code(), self.exit_code(), self.message())
    }
}

impl From<resonorm::Error> for CliError {
    fn from(e: resonorm::Error) -> Self {
        CliError::Core(e)
    }
}

use serde_json::{json, Value};

/// Failure of a run, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or invalid configuration, exit code 2.
    Config { key: Option<String>, message: String },
    /// The computation itself failed, exit code 1.
    Numerical(String),
}

impl CliError {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config { key: Some(key.into()), message: message.into() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config { .. } => 2,
            Self::Numerical(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, key, message) = match self {
            Self::Config { key, message } => ("config", key.clone(), message.clone()),
            Self::Numerical(m) => ("numerical", None, m.clone()),
        };
        json!({ "error": { "kind": kind, "key": key, "message": message }, "exit_code": self.exit_code() })
    }
}

impl From<degenwave::Error> for CliError {
    fn from(e: degenwave::Error) -> Self {
        use degenwave::Error as E;
        let message = e.to_string();
        let key = match &e {
            E::NonPositiveInput { name, .. } | E::OutOfRange { name, .. } => Some(name.to_string()),
            E::BetaOutOfRange { .. } => Some("beta".into()),
            E::TimeTooShort { .. } => Some("T".into()),
            E::DeltaOutOfRange { .. } => Some("delta".into()),
            E::InvalidMeshSpec(_) | E::DivergentWeight { .. } | E::TruncationTooSmall { .. } | E::BoundaryViolation { .. } => {
                None
            }
            E::ConvergenceFailure { .. }
            | E::NoAdmissibleEpsilon
            | E::GridMismatch(_)
            | E::InsufficientData(_)
            | E::DegenerateCellTouched { .. }
            | E::Io(_) => return Self::Numerical(message),
        };
        Self::Config { key, message }
    }
}

//! Machine-readable error records emitted on the error stream.

use serde::Serialize;

/// One error record: `code` classifies the failure, `field` names the config
/// field (or stream) at fault, `message` explains it.
#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    pub code: String,
    pub field: String,
    pub message: String,
}

impl CliError {
    pub fn new(
        code: impl Into<String>,
        field: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Self {
            code: code.into(),
            field: field.into(),
            message: message.into(),
        }
    }

    /// A config value failed validation.
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new("invalid_config", field, message)
    }

    /// An output path could not be written.
    pub fn io(message: impl Into<String>) -> Self {
        Self::new("io", "out", message)
    }

    /// Prints the record as single-line JSON on stderr.
    pub fn emit(&self) {
        eprintln!(
            "{}",
            serde_json::to_string(self).unwrap_or_else(|_| self.message.clone())
        );
    }
}

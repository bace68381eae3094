// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

use serde_json::json;
use thiserror::Error;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("invalid `{key}`: {reason}")]
    Invalid { key: String, reason: String },

    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error(transparent)]
    Core(#[from] nhbath_core::Error),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Invalid { .. } | CliError::Config { .. } => {
                EXIT_VALIDATION
            }
            CliError::Core(e) if e.is_validation() => EXIT_VALIDATION,
            CliError::Core(_) | CliError::Verification(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_VALIDATION => "validation",
            EXIT_NUMERICAL => "numerical",
            _ => "io",
        }
    }

    /// One-line JSON object for the error stream.
    pub fn to_json(&self) -> String {
        json!({
            "error": {
                "kind": self.kind(),
                "exit_code": self.exit_code(),
                "message": self.to_string(),
            }
        })
        .to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_cause() {
        let bad = CliError::Core(nhbath_core::Error::TimeTooSmall {
            t: 0.0,
            t_min: 0.01,
        });
        assert_eq!(bad.exit_code(), EXIT_VALIDATION);
        let num = CliError::Core(nhbath_core::Error::ToleranceNotMet("step".into()));
        assert_eq!(num.exit_code(), EXIT_NUMERICAL);
        let v: serde_json::Value = serde_json::from_str(&num.to_json()).unwrap();
        assert_eq!(v["error"]["kind"], "numerical");
    }
}

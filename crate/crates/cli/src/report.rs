//! Report records, command output and the mapping to exit codes.

use bsok_core::Error;
use serde::{Deserialize, Serialize};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_UNSTABLE: u8 = 3;
pub const EXIT_VERIFICATION: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One checked invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub case: String,
    pub invariant: String,
    pub status: Status,
    pub details: String,
}

impl Check {
    pub fn new(case: &str, invariant: &str, ok: bool, details: impl Into<String>) -> Self {
        Check {
            case: case.to_string(),
            invariant: invariant.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            details: details.into(),
        }
    }

    pub fn error(case: &str, invariant: &str, e: &CliError) -> Self {
        Check {
            case: case.to_string(),
            invariant: invariant.to_string(),
            status: Status::Error,
            details: e.message.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_INVALID, message: msg.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Unstable(_)
            | Error::SpanDeficiency { .. }
            | Error::BoxTooSmall(_)
            | Error::ChamberResolutionFailure(_)
            | Error::Internal(_) => EXIT_UNSTABLE,
            Error::VerificationFailure(_) => EXIT_VERIFICATION,
            _ => EXIT_INVALID,
        };
        CliError { code, message: e.to_string() }
    }
}

/// What a command produces: a JSON document and the checks it ran.
#[derive(Debug, Clone)]
pub struct Output {
    pub document: serde_json::Value,
    pub checks: Vec<Check>,
}

impl Output {
    pub fn exit_code(&self) -> u8 {
        if self.checks.iter().all(|c| c.status == Status::Pass) {
            EXIT_OK
        } else {
            EXIT_VERIFICATION
        }
    }

    /// Pretty JSON with a trailing newline; key order is fixed.
    pub fn render(&self) -> String {
        let mut doc = self.document.clone();
        if let Some(map) = doc.as_object_mut() {
            map.insert("report".into(), serde_json::to_value(&self.checks).expect("checks serialize"));
        }
        serde_json::to_string_pretty(&doc).expect("json serializes") + "\n"
    }
}

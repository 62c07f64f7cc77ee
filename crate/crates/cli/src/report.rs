//! Run reports: a deterministic body plus a separate runtime section.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use fsplit_core::witt::CacheStats;
use fsplit_core::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Skipped,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Skipped => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

/// Stable name of an error variant, used in reports and `expected` blocks.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::CapExceeded { .. } => "CapExceeded",
        Error::InvalidPrime(_) => "InvalidPrime",
        Error::NotFiniteDimensional(_) => "NotFiniteDimensional",
        Error::ZeroAlgebra => "ZeroAlgebra",
        Error::Parse(_) => "Parse",
        Error::RingMismatch(_) => "RingMismatch",
        Error::TruncationOverflow { .. } => "TruncationOverflow",
        Error::CacheCorrupt(_) => "CacheCorrupt",
        Error::CacheIo(_) => "CacheIo",
        Error::InexactDivision(_) => "InexactDivision",
        Error::ReducednessRequired => "ReducednessRequired",
        Error::NotSmooth { .. } => "NotSmooth",
        Error::BoundInconclusive { .. } => "BoundInconclusive",
        Error::WitnessInvalid(_) => "WitnessInvalid",
        Error::FactorIsSplit(_) => "FactorIsSplit",
        Error::ComparisonFailed(_) => "ComparisonFailed",
        Error::InvalidRank { .. } => "InvalidRank",
        Error::MethodDisagreement(_) => "MethodDisagreement",
        Error::Uncatalogued(_) => "Uncatalogued",
        Error::Invalid(_) => "Invalid",
    }
}

/// Input errors exit with 2, caps are skipped, anything else is a failed verdict.
pub fn error_status(e: &Error) -> Status {
    match e {
        Error::Parse(_)
        | Error::InvalidPrime(_)
        | Error::NotSmooth { .. }
        | Error::Invalid(_)
        | Error::ZeroAlgebra
        | Error::NotFiniteDimensional(_) => Status::Error,
        Error::CapExceeded { .. } => Status::Skipped,
        _ => Status::Fail,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RecordResult {
    pub id: String,
    pub kind: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mismatches: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

impl RecordResult {
    /// `passed` is the command's own verdict on `result`.
    pub fn from_outcome(id: &str, kind: &str, outcome: Result<(Value, bool), Error>, expected: Option<&Value>) -> Self {
        let mut rec = match outcome {
            Ok((value, passed)) => RecordResult {
                id: id.into(),
                kind: kind.into(),
                status: if passed { Status::Ok } else { Status::Fail },
                result: Some(value),
                error: None,
                mismatches: Vec::new(),
            },
            Err(e) => RecordResult {
                id: id.into(),
                kind: kind.into(),
                status: error_status(&e),
                result: None,
                error: Some(ErrorInfo {
                    kind: error_kind(&e).into(),
                    message: e.to_string(),
                }),
                mismatches: Vec::new(),
            },
        };
        if let Some(exp) = expected {
            rec.check_expected(exp);
        }
        rec
    }

    /// Compare each key of `expected` with the same key of the result; the
    /// key `error` names an expected error kind. A full match makes the
    /// record pass even when the verdict itself is negative.
    fn check_expected(&mut self, expected: &Value) {
        let Some(obj) = expected.as_object() else {
            self.mismatches.push("expected must be an object".into());
            self.status = self.status.max(Status::Error);
            return;
        };
        for (key, want) in obj {
            let got = if key == "error" {
                self.error.as_ref().map(|e| Value::String(e.kind.clone()))
            } else {
                self.result.as_ref().and_then(|r| r.get(key)).cloned()
            };
            if got.as_ref() != Some(want) {
                let got = got.map_or("missing".to_string(), |g| g.to_string());
                self.mismatches.push(format!("{key}: expected {want}, got {got}"));
            }
        }
        if !self.mismatches.is_empty() {
            self.status = self.status.max(Status::Fail);
        } else if !obj.is_empty() {
            // the recorded verdict was reproduced
            self.status = Status::Ok;
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub ok: usize,
    pub fail: usize,
    pub error: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Runtime {
    pub elapsed_ms: u128,
    pub jobs: usize,
    pub cache: CacheStats,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: Value,
    pub input_digest: String,
    pub summary: Summary,
    pub records: Vec<RecordResult>,
    pub runtime: Runtime,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunReport {
    pub fn new(command: Value, input: &[u8], mut records: Vec<RecordResult>, runtime: Runtime) -> Self {
        records.sort_by(|a, b| a.id.cmp(&b.id));
        let mut summary = Summary {
            total: records.len(),
            ..Summary::default()
        };
        for r in &records {
            match r.status {
                Status::Ok => summary.ok += 1,
                Status::Fail => summary.fail += 1,
                Status::Error => summary.error += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        RunReport {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            input_digest: digest(input),
            summary,
            records,
            runtime,
        }
    }

    pub fn worst(&self) -> Status {
        self.records.iter().map(|r| r.status).max().unwrap_or(Status::Ok)
    }

    pub fn exit_code(&self) -> i32 {
        self.worst().exit_code()
    }
}

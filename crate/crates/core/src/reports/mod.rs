//! Machine-readable verification reports, model and class files.
//!
//! A [`SuiteReport`] has a comparable `payload` and, outside it, a SHA-256
//! `checksum` of the payload's JSON bytes and the wall time. Two runs with
//! the same inputs give byte-identical payloads.

mod files;
mod suites;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use files::{
    class_to_json, load_class_file, load_model_file, parse_model_file, resolve_model, BasisEntry, ClassFile, IdTerms,
    ModelFile,
};
pub use suites::{parse_covers, Params, SUITES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Payload {
    pub suite: String,
    pub parameters: Params,
    /// Sorted by id.
    pub checks: Vec<Check>,
    /// `fail` iff some check failed.
    pub status: Status,
}

impl Payload {
    fn new(suite: &str, parameters: Params, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let status = if checks.iter().any(|c| c.status == Status::Fail) { Status::Fail } else { Status::Pass };
        Payload { suite: suite.to_string(), parameters, checks, status }
    }

    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("payload serializes")
    }

    pub fn checksum(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_bytes()))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub payload: Payload,
    pub checksum: String,
    pub wall_time_millis: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.payload.status == Status::Pass
    }

    /// The checksum matches the payload.
    pub fn checksum_valid(&self) -> bool {
        self.checksum == self.payload.checksum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("report: {e}")))
    }
}

/// Runs a named suite. Unknown suites and unknown or malformed parameters
/// are [`Error::Parse`]; failing checks are data in the report.
pub fn run_suite(name: &str, overrides: &Params) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut params = suites::defaults(name).ok_or_else(|| {
        Error::Parse(format!("unknown suite {name:?}; known: {}", SUITES.join(", ")))
    })?;
    for (k, v) in overrides {
        if !params.contains_key(k) {
            return Err(Error::Parse(format!("suite {name} has no parameter {k:?}")));
        }
        params.insert(k.clone(), v.clone());
    }
    let checks = if name == "all" { run_all()? } else { suites::run_checks(name, &params)? };
    let payload = Payload::new(name, params, checks);
    let checksum = payload.checksum();
    Ok(SuiteReport { payload, checksum, wall_time_millis: start.elapsed().as_millis() as u64 })
}

/// Every suite with default parameters, one thread each; check ids are
/// prefixed with the suite name.
fn run_all() -> Result<Vec<Check>> {
    let names: Vec<&str> = SUITES.iter().copied().filter(|s| *s != "all").collect();
    let results: Vec<Result<Vec<Check>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = names
            .iter()
            .map(|&name| {
                scope.spawn(move || {
                    let params = suites::defaults(name).expect("known suite");
                    suites::run_checks(name, &params)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut all = Vec::new();
    for (name, checks) in names.iter().zip(results) {
        for mut c in checks? {
            c.id = format!("{name}/{}", c.id);
            all.push(c);
        }
    }
    Ok(all)
}

/// Parses `k=v` strings into parameters.
pub fn parse_params<'a>(items: impl IntoIterator<Item = &'a str>) -> Result<Params> {
    let mut out = Params::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::Parse(format!("expected k=v, got {item:?}")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportDiff {
    pub suite_changed: Option<(String, String)>,
    pub parameters_changed: bool,
    /// `(id, status in a, status in b)`; `None` where the check is absent.
    pub status_changes: Vec<(String, Option<Status>, Option<Status>)>,
    /// Same status, different witness.
    pub witness_changes: Vec<String>,
}

impl ReportDiff {
    pub fn is_empty(&self) -> bool {
        *self == ReportDiff::default()
    }
}

/// Compares two report payloads check by check. Wall time is ignored.
pub fn diff_reports(a: &SuiteReport, b: &SuiteReport) -> ReportDiff {
    let mut d = ReportDiff::default();
    if a.payload.suite != b.payload.suite {
        d.suite_changed = Some((a.payload.suite.clone(), b.payload.suite.clone()));
    }
    d.parameters_changed = a.payload.parameters != b.payload.parameters;
    let index = |r: &SuiteReport| -> BTreeMap<String, Check> {
        r.payload.checks.iter().map(|c| (c.id.clone(), c.clone())).collect()
    };
    let (ia, ib) = (index(a), index(b));
    let ids: std::collections::BTreeSet<&String> = ia.keys().chain(ib.keys()).collect();
    for id in ids {
        match (ia.get(id), ib.get(id)) {
            (Some(x), Some(y)) if x.status == y.status => {
                if x.witness != y.witness {
                    d.witness_changes.push(id.clone());
                }
            }
            (x, y) => d.status_changes.push((id.clone(), x.map(|c| c.status), y.map(|c| c.status))),
        }
    }
    d
}

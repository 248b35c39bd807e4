//! The versioned JSON report and the command implementations behind the
//! `preab` binary.
//!
//! Exit codes:
//!
//! | code | `audit`                                   | `check`  | `decompose` |
//! |------|-------------------------------------------|----------|-------------|
//! | 0    | verdict is one of the `*-consistent` ones | pass     | success     |
//! | 1    | config or IO error                        | bad input| bad input   |
//! | 2    | a counterexample refuted a side           | fail     |             |
//! | 3    | inconclusive                              | vacuous  |             |

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::audit::{run_audit, AuditConfig, AuditReport, ZooVerdict};
use crate::backends::{Backend, MatrixCategory};
use crate::category::{classify, decompose, Category};
use crate::conditions::{check_result, Check, Instance, ProbeParams, Verdict};
use crate::with_category;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "preab";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub config: AuditConfig,
    pub report: AuditReport,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("unsupported schema_version {0:?} (this build reads version {SCHEMA_VERSION})")]
    UnsupportedSchema(Value),
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
}

impl ReportDocument {
    pub fn new(config: AuditConfig, report: AuditReport) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool: TOOL.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Parses a report, refusing schema versions other than [`SCHEMA_VERSION`].
    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        let v: Value = serde_json::from_str(text)?;
        match v.get("schema_version") {
            Some(n) if n.as_u64() == Some(SCHEMA_VERSION as u64) => Ok(serde_json::from_value(v)?),
            other => Err(ReportError::UnsupportedSchema(other.cloned().unwrap_or(Value::Null))),
        }
    }
}

pub fn verdict_exit_code(v: ZooVerdict) -> i32 {
    if v.is_consistent() {
        EXIT_OK
    } else if v.is_refuted() {
        EXIT_FAIL
    } else {
        EXIT_UNDECIDED
    }
}

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct AuditOverrides {
    pub seed: Option<u64>,
    pub backend: Option<Backend>,
}

/// Reads the config, runs the audit and writes the report to `out` (or to
/// `stdout` when `out` is `None`).
pub fn cmd_audit(
    config_path: &Path,
    out: Option<&Path>,
    overrides: &AuditOverrides,
    workers: Option<usize>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let text = match std::fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => return error(stderr, format_args!("cannot read {}: {e}", config_path.display())),
    };
    let mut cfg = match AuditConfig::from_toml(&text) {
        Ok(c) => c,
        Err(e) => return error(stderr, format_args!("{}: {e}", config_path.display())),
    };
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if let Some(b) = overrides.backend {
        cfg.backend = b;
    }
    let report = run_audit(&cfg, workers);
    let code = verdict_exit_code(report.verdict);
    let doc = ReportDocument::new(cfg, report).to_json();
    let written = match out {
        Some(p) => std::fs::write(p, &doc).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => stdout.write_all(doc.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => code,
        Err(e) => error(stderr, format_args!("{e}")),
    }
}

/// What to check. Fields left empty are taken from the input when it is a
/// replayed check result rather than a bare instance.
#[derive(Debug, Clone, Default)]
pub struct CheckRequest {
    pub backend: Option<Backend>,
    pub check: Option<Check>,
    pub probe: Option<ProbeParams>,
}

/// Runs one check on an instance (or replays a recorded check result) and
/// prints the result.
pub fn cmd_check(req: &CheckRequest, input: &str, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let v: Value = match serde_json::from_str(input) {
        Ok(v) => v,
        Err(e) => return error(stderr, format_args!("instance is not JSON: {e}")),
    };
    let (instance, recorded) = match v.get("instance") {
        Some(inst) if v.get("kind").is_none() => (inst.clone(), Some(&v)),
        _ => (v.clone(), None),
    };
    let from_record = |key: &str| recorded.and_then(|r| r.get(key)).cloned();

    let backend = match req.backend.map(Ok).or_else(|| from_record("backend").map(serde_json::from_value)) {
        Some(Ok(b)) => b,
        Some(Err(e)) => return error(stderr, format_args!("bad backend in record: {e}")),
        None => return error(stderr, format_args!("no backend given")),
    };
    let check: Check = match req.check.map(Ok).or_else(|| from_record("check").map(serde_json::from_value)) {
        Some(Ok(c)) => c,
        Some(Err(e)) => return error(stderr, format_args!("bad check in record: {e}")),
        None => return error(stderr, format_args!("no check given")),
    };
    let probe = match req.probe.clone().map(Ok).or_else(|| from_record("probe").map(serde_json::from_value)) {
        Some(Ok(p)) => p,
        Some(Err(e)) => return error(stderr, format_args!("bad probe parameters: {e}")),
        None => ProbeParams::default(),
    };

    let result = with_category!(backend, |cat| run_one(&cat, check, instance, &probe));
    match result {
        Ok(r) => {
            let code = match r.verdict {
                Verdict::Pass => EXIT_OK,
                Verdict::Fail => EXIT_FAIL,
                Verdict::Vacuous => EXIT_UNDECIDED,
            };
            match print_json(stdout, &r) {
                Ok(()) => code,
                Err(e) => error(stderr, format_args!("{e}")),
            }
        }
        Err(e) => error(stderr, format_args!("{e}")),
    }
}

fn run_one<C: MatrixCategory>(
    cat: &C,
    check: Check,
    instance: Value,
    probe: &ProbeParams,
) -> Result<crate::conditions::CheckResult, String> {
    let inst: Instance<C::Morphism> =
        serde_json::from_value(instance).map_err(|e| format!("malformed {} instance: {e}", cat.name()))?;
    inst.validate(cat).map_err(|e| format!("invalid instance: {e}"))?;
    check_result(cat, check, &inst, probe).map_err(|e| e.to_string())
}

/// Prints the kernel, cokernel, canonical decomposition and classification
/// of a morphism.
pub fn cmd_decompose(backend: Backend, input: &str, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let out = with_category!(backend, |cat| decompose_one(&cat, input));
    match out.and_then(|v| print_json(stdout, &v)) {
        Ok(()) => EXIT_OK,
        Err(e) => error(stderr, format_args!("{e}")),
    }
}

fn decompose_one<C: Category>(cat: &C, input: &str) -> Result<Value, String> {
    let f: C::Morphism = serde_json::from_str(input).map_err(|e| format!("malformed {} morphism: {e}", cat.name()))?;
    cat.check_morphism(&f).map_err(|e| format!("invalid morphism: {e}"))?;
    let d = decompose(cat, &f).map_err(|e| e.to_string())?;
    let class = classify(cat, &f).map_err(|e| e.to_string())?;
    Ok(json!({
        "backend": cat.name(),
        "morphism": f,
        "kernel": cat.kernel(&f).leg,
        "cokernel": cat.cokernel(&f).leg,
        "coim": d.coim,
        "fbar": d.fbar,
        "im": d.im,
        "class": class,
    }))
}

fn print_json<T: Serialize>(w: &mut dyn Write, v: &T) -> Result<(), String> {
    let s = serde_json::to_string_pretty(v).expect("serializable");
    writeln!(w, "{s}").map_err(|e| e.to_string())
}

fn error(stderr: &mut dyn Write, msg: std::fmt::Arguments<'_>) -> i32 {
    let _ = writeln!(stderr, "error: {msg}");
    EXIT_ERROR
}

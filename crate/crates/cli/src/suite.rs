//! Manifest runs: every entry executes independently, in parallel, and the
//! results are merged in manifest order.

use rayon::prelude::*;
use serde_json::{json, Value};

use raney_core::{Error, Result};

use crate::config::RunConfig;
use crate::run::{execute, Status};
use crate::ExitStatus;

/// The manifest shipped with the binary; covers every desk-scale sweep plus
/// the documented single-command examples.
pub const DEFAULT_MANIFEST: &str = include_str!("../manifests/default.json");

/// Parses a manifest: a JSON list of config objects. Syntax errors carry the
/// exact line and column; an entry that does not describe a valid config is
/// reported with its index and the line it starts on.
pub fn parse_manifest(text: &str) -> Result<Vec<RunConfig>> {
    let entries: Vec<Value> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("manifest: {e}")))?;
    let lines = entry_lines(text);
    entries
        .into_iter()
        .enumerate()
        .map(|(idx, v)| {
            serde_json::from_value(v).map_err(|e| {
                let line = lines.get(idx).copied().unwrap_or(0);
                Error::Parse(format!("manifest entry {} (line {line}): {e}", idx + 1))
            })
        })
        .collect()
}

/// 1-based line on which each element of the top-level array starts.
fn entry_lines(text: &str) -> Vec<usize> {
    let (mut line, mut depth) = (1, 0);
    let (mut in_string, mut escaped, mut expecting) = (false, false, false);
    let mut out = Vec::new();
    for c in text.chars() {
        if in_string {
            match (escaped, c) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_string = false,
                _ => {}
            }
        } else if !c.is_whitespace() {
            if depth == 1 && expecting && c != ']' {
                out.push(line);
                expecting = false;
            }
            match c {
                '"' => in_string = true,
                '[' | '{' => {
                    depth += 1;
                    expecting = depth == 1;
                }
                ']' | '}' => depth -= 1,
                ',' if depth == 1 => expecting = true,
                _ => {}
            }
        }
        if c == '\n' {
            line += 1;
        }
    }
    out
}

pub struct SuiteResult {
    pub json: Value,
    pub text: String,
    pub status: ExitStatus,
}

pub fn run_suite(configs: &[RunConfig]) -> SuiteResult {
    let results: Vec<(ExitStatus, Value, String)> = configs
        .par_iter()
        .map(|config| {
            let command = config.command_line();
            match execute(config) {
                Ok(o) => {
                    let status = match o.status {
                        Status::Pass => ExitStatus::Pass,
                        Status::Mismatch => ExitStatus::Mismatch,
                    };
                    let label = if status == ExitStatus::Pass { "pass" } else { "mismatch" };
                    let text = format!("[{label}] {command}");
                    (status, json!({"command": command, "status": label, "result": o.json}), text)
                }
                Err(e) => {
                    let status = ExitStatus::from_error(&e);
                    let label = if status == ExitStatus::Config { "config-error" } else { "internal-error" };
                    let text = format!("[{label}] {command}: {e}");
                    (status, json!({"command": command, "status": label, "error": e.to_string()}), text)
                }
            }
        })
        .collect();

    let count = |s: ExitStatus| results.iter().filter(|r| r.0 == s).count();
    let status = ExitStatus::combine(results.iter().map(|r| r.0));
    let mut lines: Vec<String> = results.iter().map(|r| r.2.clone()).collect();
    let mut notes = Vec::new();
    if configs.is_empty() {
        notes.push("manifest has no checks".to_owned());
    }
    let verdict = if status == ExitStatus::Pass { "pass" } else { "fail" };
    lines.push(format!(
        "suite: {verdict} ({} checks: {} passed, {} mismatches, {} config errors, {} internal errors)",
        configs.len(),
        count(ExitStatus::Pass),
        count(ExitStatus::Mismatch),
        count(ExitStatus::Config),
        count(ExitStatus::Internal)
    ));
    let json = json!({
        "verdict": verdict,
        "checks": configs.len(),
        "passed": count(ExitStatus::Pass),
        "mismatches": count(ExitStatus::Mismatch),
        "config_errors": count(ExitStatus::Config),
        "internal_errors": count(ExitStatus::Internal),
        "notes": notes,
        "results": results.into_iter().map(|r| r.1).collect::<Vec<_>>(),
    });
    SuiteResult { json, text: lines.join("\n"), status }
}

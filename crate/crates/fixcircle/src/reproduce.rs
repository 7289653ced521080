//! Runs every bundled scenario and writes their outputs side by side.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::bundled::BUNDLED;
use crate::emit::write_file;
use crate::run::run_scenario;
use crate::scenario::parse_scenario;

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub checks: usize,
    pub failed: usize,
    pub passed: bool,
}

/// Runs the bundled scenarios in order, writing each one's declared outputs
/// and `report.json` to `out/<name>/`, plus `out/summary.txt`.
pub fn reproduce_all(seed: u64, out: &Path) -> io::Result<Vec<Row>> {
    let mut rows = Vec::new();
    for (name, text) in BUNDLED {
        let scenario = parse_scenario(text).map_err(io::Error::other)?;
        let run = run_scenario(&scenario, seed).map_err(io::Error::other)?;
        let dir = out.join(name);
        run.write_outputs(&dir)?;
        write_file(&dir.join("report.json"), run.report.to_json().as_bytes())?;
        rows.push(Row {
            name: name.to_string(),
            checks: run.report.checks.len(),
            failed: run.report.checks.iter().filter(|c| !c.passed).count(),
            passed: run.report.passed,
        });
    }
    write_file(&out.join("summary.txt"), render_table(&rows, seed).as_bytes())?;
    Ok(rows)
}

pub fn render_table(rows: &[Row], seed: u64) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(8).max(8);
    let mut s = String::new();
    let _ = writeln!(s, "{:<width$}  {:>6}  {:>6}  result", "scenario", "checks", "failed");
    for r in rows {
        let _ = writeln!(
            s,
            "{:<width$}  {:>6}  {:>6}  {}",
            r.name,
            r.checks,
            r.failed,
            if r.passed { "PASS" } else { "FAIL" }
        );
    }
    let passed = rows.iter().filter(|r| r.passed).count();
    let _ = writeln!(s, "{passed}/{} scenarios passed (seed {seed})", rows.len());
    s
}

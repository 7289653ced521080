//! Plain-text rendering of run reports for the terminal.

use std::fmt::Write as _;

use fixcircle_core::theorems::{ConditionReport, Witness};
use fixcircle_core::Point;

use crate::run::{CheckResult, Outcome, RunReport};

const MAX_LISTED: usize = 8;

/// One line per check, then failed expectations indented below it.
pub fn render(report: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scenario {} (seed {})", report.scenario.name, report.seed);
    let width = report.checks.iter().map(|c| c.label.len()).max().unwrap_or(0);
    for c in &report.checks {
        let _ = writeln!(
            s,
            "  {}  {:<width$}  {:<12}  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.label,
            c.kind,
            describe(c)
        );
        for e in c.expectations.iter().filter(|e| !e.passed) {
            let _ = writeln!(s, "        expected {} {}, got {}", e.what, e.expected, e.actual);
        }
    }
    let _ = writeln!(s, "result: {}", if report.passed { "PASS" } else { "FAIL" });
    s
}

fn describe(c: &CheckResult) -> String {
    if let Some(e) = &c.error {
        return format!("error: {e}");
    }
    match &c.outcome {
        None => String::new(),
        Some(Outcome::Solution(sol)) => format!("{} points {}", sol.points.len(), list(&sol.points)),
        Some(Outcome::FixedPoints { points }) => format!("{} fixed points {}", points.len(), list(points)),
        Some(Outcome::Circle(v)) => format!(
            "C({}, {}) fixed: {} ({} points, max displacement {:e})",
            v.circle.center(),
            v.circle.radius(),
            v.fixed,
            v.checked_points,
            v.max_displacement
        ),
        Some(Outcome::Existence(o)) => {
            format!("{}; {}; circle fixed: {}", condition(&o.first), condition(&o.second), o.fixed.fixed)
        }
        Some(Outcome::Identity(o)) => format!("{}; identity on sample: {}", condition(&o.report), o.identity_on_sample),
        Some(Outcome::Condition(r)) => {
            let mut s = condition(r);
            if let Some(w) = r.witnesses.first() {
                let _ = write!(s, " ({})", witness(w));
            }
            if !r.precondition_failures.is_empty() {
                let _ = write!(s, ", {} pairs with unbounded orbits", r.precondition_failures.len());
            }
            s
        }
        Some(Outcome::Thm6(o)) => format!(
            "r = {}{}; {}; {}; circle fixed: {}; ball fixed: {}",
            o.r,
            if o.r_exact { "" } else { " (sample estimate)" },
            condition(&o.eqn1),
            condition(&o.eqn2),
            o.circle.fixed,
            o.circle.ball_fixed.unwrap_or(false)
        ),
        Some(Outcome::Discovered { circles }) => {
            let names: Vec<String> =
                circles.iter().map(|v| format!("C({}, {})", v.circle.center(), v.circle.radius())).collect();
            format!("{} fixed circles: {}", circles.len(), names.join(", "))
        }
        Some(Outcome::Axioms(r)) => format!("{} trials, {} violations", r.n_trials, r.n_violations),
    }
}

fn condition(r: &ConditionReport) -> String {
    format!("{} {}", r.condition_id, r.verdict)
}

fn witness(w: &Witness) -> String {
    format!("worst at {}: lhs {}, rhs {}, margin {}", list(&w.points), w.lhs, w.rhs, w.margin)
}

fn list(points: &[Point]) -> String {
    let mut items: Vec<String> = points.iter().take(MAX_LISTED).map(|p| p.to_string()).collect();
    if points.len() > MAX_LISTED {
        items.push("...".into());
    }
    format!("{{{}}}", items.join(", "))
}

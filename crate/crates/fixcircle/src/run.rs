//! Executes a [`Scenario`] and collects a [`RunReport`].

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};

use fixcircle_core::axioms::{fuzz_axioms, AxiomOptions, AxiomReport};
use fixcircle_core::geometry::{solve_circle_1d, trace_circle_1d, trace_circle_2d, TraceOptions};
use fixcircle_core::mappings::fixed_point_set;
use fixcircle_core::theorems::{
    check_diameter_uniqueness, check_identity_condition, check_rhoades_uniqueness, check_thm1, check_thm2, check_thm6,
    discover_fixed_circles, CheckOptions, CircleSample, ConditionReport, ExistenceOutcome, FixedCircleVerdict,
    IdentityOutcome, Thm6Outcome,
};
use fixcircle_core::{Circle, CircleSolution, PiecewiseMap, Point, SMetricSpec, Window};
use serde::Serialize;

use crate::emit::{emit_csv, emit_svg, write_file, Layer};
use crate::error::ScenarioError;
use crate::scenario::{CheckSpec, CircleRef, CircleSampling, Coords, Expectations, OutputKind, Resolved, Scenario};

/// A labelled point set that CSV and SVG outputs can draw from. For circle
/// samples `residuals` holds `S(p, p, x0) − r`; for fixed-point sets it holds
/// the displacement `S(p, p, Tp)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Cloud {
    pub points: Vec<Point>,
    pub residuals: Vec<f64>,
}

impl From<CircleSolution> for Cloud {
    fn from(s: CircleSolution) -> Self {
        Cloud { points: s.points, residuals: s.residuals }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationResult {
    pub what: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Outcome {
    Solution(CircleSolution),
    FixedPoints { points: Vec<Point> },
    Circle(FixedCircleVerdict),
    Existence(ExistenceOutcome),
    Identity(IdentityOutcome),
    Condition(ConditionReport),
    Thm6(Thm6Outcome),
    Discovered { circles: Vec<FixedCircleVerdict> },
    Axioms(AxiomReport),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub label: String,
    pub kind: &'static str,
    /// No error and every stated expectation met.
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub expectations: Vec<ExpectationResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub scenario: Scenario,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization is infallible");
        s.push('\n');
        s
    }
}

/// A finished run: the report plus the point sets produced by each check.
#[derive(Debug, Clone)]
pub struct Run {
    pub report: RunReport,
    pub clouds: BTreeMap<String, Cloud>,
    /// Dimension of the scenario's space.
    pub dim: usize,
}

impl Run {
    /// Writes the scenario's declared outputs under `dir` and returns the
    /// paths written, in declaration order.
    pub fn write_outputs(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        let scenario = &self.report.scenario;
        let empty = Cloud::default();
        let mut written = Vec::new();
        for out in &scenario.outputs {
            let path = dir.join(&out.path);
            let cloud = |label: &str| self.clouds.get(label).unwrap_or(&empty);
            match out.kind {
                OutputKind::Report => write_file(&path, self.report.to_json().as_bytes())?,
                OutputKind::Csv => emit_csv(cloud(&out.sources[0]), self.dim, &path)?,
                OutputKind::Svg => {
                    let layers: Vec<Layer<'_>> =
                        out.sources.iter().map(|l| Layer { label: l, cloud: cloud(l) }).collect();
                    let window = match out.window.as_ref().or(scenario.domain.window.as_ref()) {
                        Some(w) => w.clone(),
                        None => bounding_window(layers.iter().flat_map(|l| &l.cloud.points), self.dim),
                    };
                    let title = if scenario.description.is_empty() { &scenario.name } else { &scenario.description };
                    emit_svg(&layers, &window, title, &path)?
                }
            }
            written.push(path);
        }
        Ok(written)
    }
}

/// Smallest padded window holding `points`; the unit box when there are none.
fn bounding_window<'a>(points: impl Iterator<Item = &'a Point>, dim: usize) -> Window {
    let dim = dim.clamp(1, 2);
    let (mut lo, mut hi) = (vec![f64::INFINITY; dim], vec![f64::NEG_INFINITY; dim]);
    for p in points {
        for (k, c) in p.coords().iter().take(dim).enumerate() {
            lo[k] = lo[k].min(*c);
            hi[k] = hi[k].max(*c);
        }
    }
    for k in 0..dim {
        if lo[k] >= hi[k] {
            let mid = if lo[k].is_finite() { lo[k] } else { 0.0 };
            lo[k] = mid - 1.0;
            hi[k] = mid + 1.0;
        }
        let pad = 0.05 * (hi[k] - lo[k]);
        lo[k] -= pad;
        hi[k] += pad;
    }
    Window { lo, hi }
}

/// Runs every check of `scenario` in declaration order. Errors inside a
/// check are recorded in its result; only an unresolvable scenario is an
/// error here.
pub fn run_scenario(scenario: &Scenario, seed: u64) -> Result<Run, ScenarioError> {
    scenario.validate()?;
    let resolved = scenario.resolve(seed)?;
    let mut ctx = Ctx { scenario, resolved: &resolved, seed, clouds: BTreeMap::new() };
    let mut checks = Vec::with_capacity(scenario.checks.len());
    for (i, check) in scenario.checks.iter().enumerate() {
        let label = scenario.label(i);
        let mut exp = Vec::new();
        let (outcome, cloud, error) = match ctx.run_check(&check.spec, &mut exp) {
            Ok((o, c)) => (Some(o), c, None),
            Err(e) => (None, None, Some(e.to_string())),
        };
        if let Some(c) = cloud {
            ctx.clouds.insert(label.clone(), c);
        }
        checks.push(CheckResult {
            passed: error.is_none() && exp.iter().all(|e| e.passed),
            label,
            kind: check.spec.kind(),
            error,
            expectations: exp,
            outcome,
        });
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(Run {
        report: RunReport {
            tool: "fixcircle",
            version: env!("CARGO_PKG_VERSION"),
            seed,
            scenario: scenario.clone(),
            checks,
            passed,
        },
        clouds: ctx.clouds,
        dim: resolved.metric.dimension(),
    })
}

struct Ctx<'a> {
    scenario: &'a Scenario,
    resolved: &'a Resolved,
    seed: u64,
    clouds: BTreeMap<String, Cloud>,
}

type CheckOut = (Outcome, Option<Cloud>);

impl Ctx<'_> {
    fn metric(&self) -> &SMetricSpec {
        &self.resolved.metric
    }

    fn map(&self) -> Result<&PiecewiseMap, ScenarioError> {
        self.resolved.map.as_ref().ok_or_else(|| ScenarioError::Invalid("check needs a `map`".into()))
    }

    fn opts(&self) -> CheckOptions {
        let t = &self.scenario.tolerances;
        CheckOptions { tol: t.tol, tol_strict: t.tol_strict, ..CheckOptions::default() }
    }

    fn window(&self) -> Result<&Window, ScenarioError> {
        self.scenario
            .domain
            .window
            .as_ref()
            .ok_or_else(|| ScenarioError::Invalid("this check needs a domain `window`".into()))
    }

    fn circle(&self, center: &Coords, radius: f64) -> Result<Circle, ScenarioError> {
        CircleRef { center: center.clone(), radius }.resolve(self.metric())
    }

    fn circle_sample(&self, circle: &Circle, how: &CircleSampling) -> Result<CircleSample, ScenarioError> {
        let tol = self.scenario.tolerances.tol;
        let traced = |resolution: Option<usize>, band_tol: Option<f64>| -> Result<CircleSample, ScenarioError> {
            let d = TraceOptions::default();
            let opts = TraceOptions {
                resolution: resolution.unwrap_or(d.resolution),
                band_tol: band_tol.unwrap_or(d.band_tol),
            };
            Ok(CircleSample::traced(circle, self.window()?, &opts)?)
        };
        match how {
            CircleSampling::Analytic => Ok(CircleSample::analytic(circle)?),
            CircleSampling::Traced { resolution, band_tol } => traced(*resolution, *band_tol),
            CircleSampling::Domain => Ok(CircleSample::on_domain(circle, &self.resolved.domain, tol)?),
            CircleSampling::Auto => {
                if circle.metric().has_linear_self_distance() {
                    Ok(CircleSample::analytic(circle)?)
                } else if self.scenario.domain.window.is_some() {
                    traced(None, None)
                } else {
                    Ok(CircleSample::on_domain(circle, &self.resolved.domain, tol)?)
                }
            }
        }
    }

    fn sample_cloud(circle: &Circle, sample: &CircleSample) -> Result<Cloud, ScenarioError> {
        let residuals = sample
            .points
            .iter()
            .map(|p| circle.membership(p, 0.0).map(|m| m.residual))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Cloud { points: sample.points.clone(), residuals })
    }

    fn run_check(&mut self, spec: &CheckSpec, exp: &mut Vec<ExpectationResult>) -> Result<CheckOut, ScenarioError> {
        let opts = self.opts();
        let point_tol = self.scenario.tolerances.point_tol;
        match spec {
            CheckSpec::Solve { center, radius, expect_points } => {
                let sol = solve_circle_1d(self.metric(), &center.to_point()?, *radius)?;
                if let Some(want) = expect_points {
                    expect_point_set(exp, "points", want, &sol.points, point_tol)?;
                }
                Ok((Outcome::Solution(sol.clone()), Some(sol.into())))
            }
            CheckSpec::Trace { center, radius, window, resolution, band_tol, expect_min_points, expect_near } => {
                let window = match window {
                    Some(w) => w,
                    None => self.window()?,
                };
                let d = TraceOptions::default();
                let topts = TraceOptions {
                    resolution: resolution.unwrap_or(d.resolution),
                    band_tol: band_tol.unwrap_or(d.band_tol),
                };
                let x0 = center.to_point()?;
                let sol = if self.metric().dimension() == 1 {
                    trace_circle_1d(self.metric(), &x0, *radius, window, &topts)?
                } else {
                    trace_circle_2d(self.metric(), &x0, *radius, window, &topts)?
                };
                if let Some(n) = expect_min_points {
                    push(exp, "point count", format!(">= {n}"), sol.points.len().to_string(), sol.points.len() >= *n);
                }
                for near in expect_near {
                    let target = near.point.to_point()?;
                    let best = sol.points.iter().map(|p| p.max_abs_diff(&target)).fold(f64::INFINITY, f64::min);
                    push(
                        exp,
                        &format!("nearest point to {target}"),
                        format!("<= {}", near.within),
                        format!("{best:e}"),
                        best <= near.within,
                    );
                }
                Ok((Outcome::Solution(sol.clone()), Some(sol.into())))
            }
            CheckSpec::FixedPoints { expect_points } => {
                let map = self.map()?;
                let points = fixed_point_set(map, self.metric(), &self.resolved.domain, opts.tol);
                if let Some(want) = expect_points {
                    expect_point_set(exp, "fixed points", want, &points, point_tol)?;
                }
                let residuals = points
                    .iter()
                    .map(|p| map.apply(p).and_then(|tp| self.metric().self_distance(p, &tp)))
                    .collect::<Result<Vec<_>, _>>()?;
                let cloud = Cloud { points: points.clone(), residuals };
                Ok((Outcome::FixedPoints { points }, Some(cloud)))
            }
            CheckSpec::CircleFixed { center, radius, sample, expect_fixed } => {
                let circle = self.circle(center, *radius)?;
                let s = self.circle_sample(&circle, sample)?;
                let v = FixedCircleVerdict::evaluate(self.map()?, &circle, &s.points, opts.tol)?;
                expect_bool(exp, "circle fixed", *expect_fixed, v.fixed);
                Ok((Outcome::Circle(v), Some(Self::sample_cloud(&circle, &s)?)))
            }
            CheckSpec::Thm1 { center, radius, sample, expect, expect_fixed }
            | CheckSpec::Thm2 { center, radius, sample, expect, expect_fixed, .. } => {
                let circle = self.circle(center, *radius)?;
                let s = self.circle_sample(&circle, sample)?;
                let out = match spec {
                    CheckSpec::Thm2 { h, .. } => check_thm2(self.map()?, &circle, &s, *h, &opts)?,
                    _ => check_thm1(self.map()?, &circle, &s, &opts)?,
                };
                expect_verdicts(exp, expect, &[&out.first, &out.second]);
                expect_bool(exp, "circle fixed", *expect_fixed, out.fixed.fixed);
                Ok((Outcome::Existence(out), Some(Self::sample_cloud(&circle, &s)?)))
            }
            CheckSpec::Identity { center, h, expect, expect_identity } => {
                let out = check_identity_condition(
                    self.map()?,
                    self.metric(),
                    &center.to_point()?,
                    *h,
                    &self.resolved.domain,
                    &opts,
                )?;
                expect_verdicts(exp, expect, &[&out.report]);
                expect_bool(exp, "identity on sample", *expect_identity, out.identity_on_sample);
                Ok((Outcome::Identity(out), None))
            }
            CheckSpec::Rhoades { center, radius, sample, expect }
            | CheckSpec::Diameter { center, radius, sample, expect } => {
                let circle = self.circle(center, *radius)?;
                let s = self.circle_sample(&circle, sample)?;
                let check = if matches!(spec, CheckSpec::Rhoades { .. }) {
                    check_rhoades_uniqueness
                } else {
                    check_diameter_uniqueness
                };
                let report = check(self.map()?, &circle, &s, &self.resolved.domain, &opts)?;
                expect_verdicts(exp, expect, &[&report]);
                Ok((Outcome::Condition(report), Some(Self::sample_cloud(&circle, &s)?)))
            }
            CheckSpec::Thm6 { center, expect_r, expect, expect_fixed, expect_ball_fixed } => {
                let out = check_thm6(self.map()?, self.metric(), &center.to_point()?, &self.resolved.domain, &opts)?;
                if let Some(r) = expect_r {
                    push(exp, "r", r.to_string(), out.r.to_string(), (out.r - r).abs() <= opts.tol);
                }
                expect_verdicts(exp, expect, &[&out.eqn1, &out.eqn2, &out.eqn2_inner]);
                expect_bool(exp, "circle fixed", *expect_fixed, out.circle.fixed);
                expect_bool(exp, "ball fixed", *expect_ball_fixed, out.circle.ball_fixed == Some(true));
                let circle = out.circle.circle.clone();
                let s = CircleSample::best_effort(&circle, &self.resolved.domain, opts.tol)?;
                Ok((Outcome::Thm6(out), Some(Self::sample_cloud(&circle, &s)?)))
            }
            CheckSpec::Discover { centers, expect_circles } => {
                let centers = centers.iter().map(Coords::to_point).collect::<Result<Vec<_>, _>>()?;
                let found = discover_fixed_circles(self.map()?, self.metric(), &self.resolved.domain, &centers, &opts)?;
                if let Some(want) = expect_circles {
                    let fmt = |cs: &mut dyn Iterator<Item = (Point, f64)>| {
                        cs.map(|(c, r)| format!("C({c}, {r})")).collect::<Vec<_>>().join(", ")
                    };
                    let got: Vec<(Point, f64)> =
                        found.iter().map(|v| (v.circle.center().clone(), v.circle.radius())).collect();
                    let mut want_pts = Vec::new();
                    for c in want {
                        want_pts.push((c.center.to_point()?, c.radius));
                    }
                    want_pts.sort_by(|a, b| a.0.cmp_lex(&b.0).then(a.1.total_cmp(&b.1)));
                    let ok = got.len() == want_pts.len()
                        && got.iter().zip(&want_pts).all(|((c, r), (wc, wr))| {
                            c.max_abs_diff(wc) <= point_tol && (r - wr).abs() <= opts.tol * wr.abs().max(1.0)
                        });
                    push(exp, "fixed circles", fmt(&mut want_pts.iter().cloned()), fmt(&mut got.iter().cloned()), ok);
                }
                let mut cloud = Cloud::default();
                for v in &found {
                    for p in CircleSample::best_effort(&v.circle, &self.resolved.domain, opts.tol)?.points {
                        cloud.residuals.push(v.circle.membership(&p, 0.0)?.residual);
                        cloud.points.push(p);
                    }
                }
                Ok((Outcome::Discovered { circles: found }, Some(cloud)))
            }
            CheckSpec::Axioms { trials, expect_clean } => {
                let aopts =
                    AxiomOptions { tol: opts.tol, tol_pts: point_tol, seed: self.seed, ..AxiomOptions::default() };
                let report = fuzz_axioms(self.metric(), self.window()?, *trials, &aopts)?;
                expect_bool(exp, "no axiom violations", *expect_clean, report.is_clean());
                Ok((Outcome::Axioms(report), None))
            }
        }
    }
}

fn push(exp: &mut Vec<ExpectationResult>, what: &str, expected: String, actual: String, passed: bool) {
    exp.push(ExpectationResult { what: what.to_string(), expected, actual, passed });
}

fn expect_bool(exp: &mut Vec<ExpectationResult>, what: &str, want: Option<bool>, got: bool) {
    if let Some(want) = want {
        push(exp, what, want.to_string(), got.to_string(), want == got);
    }
}

fn expect_verdicts(exp: &mut Vec<ExpectationResult>, expect: &Expectations, reports: &[&ConditionReport]) {
    for (name, want) in expect {
        let report = reports.iter().find(|r| r.condition_id.as_str() == name);
        let (actual, passed) = match report {
            Some(r) => (r.verdict.to_string(), want.accepts(r.verdict)),
            None => ("not evaluated".to_string(), false),
        };
        push(exp, name, want.to_string(), actual, passed);
    }
}

fn expect_point_set(
    exp: &mut Vec<ExpectationResult>,
    what: &str,
    want: &[Coords],
    got: &[Point],
    tol: f64,
) -> Result<(), ScenarioError> {
    let mut want = want.iter().map(Coords::to_point).collect::<Result<Vec<_>, _>>()?;
    want.sort_by(Point::cmp_lex);
    let mut got_sorted = got.to_vec();
    got_sorted.sort_by(Point::cmp_lex);
    let ok = want.len() == got_sorted.len() && want.iter().zip(&got_sorted).all(|(a, b)| a.max_abs_diff(b) <= tol);
    let show = |ps: &[Point]| format!("{{{}}}", ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "));
    push(exp, what, show(&want), show(&got_sorted), ok);
    Ok(())
}

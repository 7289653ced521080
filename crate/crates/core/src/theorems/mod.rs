//! Executable checks of the fixed-circle existence and uniqueness
//! conditions.
//!
//! Each checker evaluates one inequality at every point (or pair) of a
//! sample and returns a [`ConditionReport`]. Quantifiers over infinite sets
//! are necessarily sampled, so a passing check over a sample that is not
//! known to exhaust the quantified set reports [`Verdict::HoldsOnSample`]
//! rather than [`Verdict::Holds`]. An empty quantified set gives
//! [`Verdict::Vacuous`].
//!
//! With `φ(x) = S(x, x, x0)` the conditions are:
//!
//! | id            | inequality                                             |
//! |---------------|--------------------------------------------------------|
//! | `thm1_S1`     | `S(x,x,Tx) ≤ φ(x) + φ(Tx) − 2r`                        |
//! | `thm1_S2`     | `S(x,x,Tx) + S(Tx,Tx,x0) ≤ r`                          |
//! | `thm2_S1`     | `S(x,x,Tx) ≤ φ(x) − φ(Tx)`                             |
//! | `thm2_S2`     | `h·S(x,x,Tx) + S(Tx,Tx,x0) ≥ r`, `h ∈ [0, 1)`          |
//! | `I_S`         | `S(x,x,Tx) ≤ (φ(x) − φ(Tx)) / h`, `h > 2`              |
//! | `Rhoades_S25` | `S(Tx,Tx,Ty) < max{S(x,x,y), S(Tx,Tx,x), S(Ty,Ty,y), S(Ty,Ty,x), S(Tx,Tx,y)}` |
//! | `Diam_S25a`   | `S(Tx,Tx,Ty) < diam(U_x ∪ U_y)`                        |
//! | `eqn1`        | `S(x,x,Tx) < R_S(x, x0)` whenever `S(Tx,Tx,x) > 0`     |
//! | `eqn2`        | `S(Tx,Tx,x0) = r` on `C(x0, r)`                        |

mod discover;
mod existence;
mod infinity;
mod uniqueness;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use discover::discover_fixed_circles;
pub use existence::{
    check_identity_condition, check_thm1, check_thm2, sweep_thm2_h, ExistenceOutcome, IdentityOutcome,
};
pub use infinity::{check_thm6, compute_r_s, Thm6Outcome};
pub use uniqueness::{check_diameter_uniqueness, check_rhoades_uniqueness};

use crate::error::Result;
use crate::geometry::{solve_circle_1d, trace_circle_1d, trace_circle_2d, Circle, TraceOptions};
use crate::mappings::PiecewiseMap;
use crate::point::{cmp_point_lists, Point};
use crate::sampling::Window;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ConditionId {
    #[cfg_attr(feature = "serde", serde(rename = "thm1_S1"))]
    Thm1S1,
    #[cfg_attr(feature = "serde", serde(rename = "thm1_S2"))]
    Thm1S2,
    #[cfg_attr(feature = "serde", serde(rename = "thm2_S1"))]
    Thm2S1,
    #[cfg_attr(feature = "serde", serde(rename = "thm2_S2"))]
    Thm2S2,
    #[cfg_attr(feature = "serde", serde(rename = "I_S"))]
    IdentityIs,
    #[cfg_attr(feature = "serde", serde(rename = "Rhoades_S25"))]
    RhoadesS25,
    #[cfg_attr(feature = "serde", serde(rename = "Diam_S25a"))]
    DiamS25a,
    #[cfg_attr(feature = "serde", serde(rename = "eqn1"))]
    Eqn1,
    #[cfg_attr(feature = "serde", serde(rename = "eqn2"))]
    Eqn2,
    /// `S(Tx, Tx, x0) = ρ` on the inner circles `C(x0, ρ)`, `ρ < r`.
    #[cfg_attr(feature = "serde", serde(rename = "eqn2_inner"))]
    Eqn2Inner,
}

impl ConditionId {
    pub const ALL: [ConditionId; 10] = [
        ConditionId::Thm1S1,
        ConditionId::Thm1S2,
        ConditionId::Thm2S1,
        ConditionId::Thm2S2,
        ConditionId::IdentityIs,
        ConditionId::RhoadesS25,
        ConditionId::DiamS25a,
        ConditionId::Eqn1,
        ConditionId::Eqn2,
        ConditionId::Eqn2Inner,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::Thm1S1 => "thm1_S1",
            ConditionId::Thm1S2 => "thm1_S2",
            ConditionId::Thm2S1 => "thm2_S1",
            ConditionId::Thm2S2 => "thm2_S2",
            ConditionId::IdentityIs => "I_S",
            ConditionId::RhoadesS25 => "Rhoades_S25",
            ConditionId::DiamS25a => "Diam_S25a",
            ConditionId::Eqn1 => "eqn1",
            ConditionId::Eqn2 => "eqn2",
            ConditionId::Eqn2Inner => "eqn2_inner",
        }
    }

    pub fn from_name(name: &str) -> Option<ConditionId> {
        Self::ALL.into_iter().find(|c| c.as_str() == name)
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize), serde(rename_all = "snake_case"))]
pub enum Verdict {
    Holds,
    Fails,
    HoldsOnSample,
    Vacuous,
}

impl Verdict {
    /// `Holds` or `HoldsOnSample`.
    pub fn holds(self) -> bool {
        matches!(self, Verdict::Holds | Verdict::HoldsOnSample)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::HoldsOnSample => "holds on sample",
            Verdict::Vacuous => "vacuous",
        })
    }
}

/// One evaluated instance. `margin` is positive when the inequality is
/// satisfied with room to spare and negative when violated; for strict
/// inequalities a tie has margin 0 and fails.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Witness {
    pub points: Vec<Point>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConditionReport {
    pub condition_id: ConditionId,
    pub verdict: Verdict,
    pub h_param: Option<f64>,
    /// Failing instances (worst first, at most [`MAX_WITNESSES`]), or the
    /// single tightest instance when the condition holds.
    pub witnesses: Vec<Witness>,
    pub n_checked: usize,
    pub n_failed: usize,
    /// Instances skipped because a hypothesis of the condition failed,
    /// e.g. an unbounded orbit.
    pub precondition_failures: Vec<Witness>,
    pub sample_descriptor: String,
}

pub const MAX_WITNESSES: usize = 32;

/// Tolerances and orbit limits shared by the checkers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Slack for `≤`, `≥` and `=` comparisons, and for circle membership.
    pub tol: f64,
    /// Strict inequalities pass only when `lhs < rhs − tol_strict`.
    pub tol_strict: f64,
    pub orbit: crate::geometry::OrbitOptions,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { tol: crate::DEFAULT_TOL, tol_strict: 0.0, orbit: Default::default() }
    }
}

/// Points of a circle to quantify over.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSample {
    pub points: Vec<Point>,
    /// True when `points` is the whole circle.
    pub exhaustive: bool,
    pub descriptor: String,
}

impl CircleSample {
    /// The exact two-point circle on ℝ.
    pub fn analytic(circle: &Circle) -> Result<Self> {
        let sol = solve_circle_1d(circle.metric(), circle.center(), circle.radius())?;
        Ok(CircleSample {
            points: sol.points,
            exhaustive: true,
            descriptor: alloc::format!("exact circle C({}, {})", circle.center(), circle.radius()),
        })
    }

    pub fn traced(circle: &Circle, window: &Window, opts: &TraceOptions) -> Result<Self> {
        let trace = if circle.metric().dimension() == 1 { trace_circle_1d } else { trace_circle_2d };
        let sol = trace(circle.metric(), circle.center(), circle.radius(), window, opts)?;
        Ok(CircleSample {
            points: sol.points,
            exhaustive: false,
            descriptor: alloc::format!(
                "traced circle C({}, {}), resolution {}, band {}",
                circle.center(),
                circle.radius(),
                opts.resolution,
                opts.band_tol
            ),
        })
    }

    /// Analytic when the metric allows it, otherwise the sample points lying
    /// on the circle.
    pub fn best_effort(circle: &Circle, sample: &[Point], tol: f64) -> Result<Self> {
        if circle.metric().has_linear_self_distance() {
            return Self::analytic(circle);
        }
        Self::on_domain(circle, sample, tol)
    }

    /// The points of `sample` within `tol` of the circle.
    pub fn on_domain(circle: &Circle, sample: &[Point], tol: f64) -> Result<Self> {
        let mut points = Vec::new();
        for p in sample {
            if circle.contains(p, tol)? {
                points.push(p.clone());
            }
        }
        Ok(CircleSample {
            points,
            exhaustive: false,
            descriptor: alloc::format!("sample points on C({}, {})", circle.center(), circle.radius()),
        })
    }

    pub fn from_points(points: Vec<Point>, exhaustive: bool, descriptor: impl Into<String>) -> Self {
        CircleSample { points, exhaustive, descriptor: descriptor.into() }
    }
}

/// Pointwise fixedness of `T` on a circle, with optional uniqueness and
/// closed-ball findings.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FixedCircleVerdict {
    pub circle: Circle,
    /// `max_displacement ≤ tol` over at least one checked point.
    pub fixed: bool,
    pub checked_points: usize,
    /// Largest `S(x, x, Tx)` over the checked points.
    pub max_displacement: f64,
    pub uniqueness: Option<ConditionReport>,
    pub ball_fixed: Option<bool>,
}

impl FixedCircleVerdict {
    /// Observed fixedness of `circle` at `points`.
    pub fn evaluate(map: &PiecewiseMap, circle: &Circle, points: &[Point], tol: f64) -> Result<Self> {
        let max_displacement = max_displacement(map, circle.metric(), points)?;
        Ok(FixedCircleVerdict {
            circle: circle.clone(),
            fixed: !points.is_empty() && max_displacement <= tol,
            checked_points: points.len(),
            max_displacement,
            uniqueness: None,
            ball_fixed: None,
        })
    }
}

pub(crate) fn max_displacement(map: &PiecewiseMap, metric: &crate::SMetricSpec, points: &[Point]) -> Result<f64> {
    let mut m = 0.0f64;
    for p in points {
        let tp = map.apply(p)?;
        m = m.max(metric.self_distance(p, &tp)?);
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Relation {
    Le,
    Ge,
    Lt,
    Eq,
}

/// Accumulates instances of one condition into a report.
pub(crate) struct Tally {
    condition: ConditionId,
    relation: Relation,
    tol: f64,
    n_checked: usize,
    failures: Vec<Witness>,
    tightest: Option<Witness>,
    preconditions: Vec<Witness>,
}

impl Tally {
    pub fn new(condition: ConditionId, relation: Relation, tol: f64) -> Self {
        Tally {
            condition,
            relation,
            tol,
            n_checked: 0,
            failures: Vec::new(),
            tightest: None,
            preconditions: Vec::new(),
        }
    }

    pub fn push(&mut self, points: Vec<Point>, lhs: f64, rhs: f64) {
        let (margin, pass) = match self.relation {
            Relation::Le => (rhs - lhs, rhs - lhs >= -self.tol),
            Relation::Ge => (lhs - rhs, lhs - rhs >= -self.tol),
            Relation::Lt => (rhs - lhs, rhs - lhs > self.tol),
            Relation::Eq => (-(lhs - rhs).abs(), (lhs - rhs).abs() <= self.tol),
        };
        self.n_checked += 1;
        let w = Witness { points, lhs, rhs, margin };
        if !pass {
            self.failures.push(w);
        } else if self.tightest.as_ref().is_none_or(|t| witness_order(&w, t).is_lt()) {
            self.tightest = Some(w);
        }
    }

    pub fn precondition_failure(&mut self, points: Vec<Point>, lhs: f64, rhs: f64) {
        self.preconditions.push(Witness { points, lhs, rhs, margin: f64::NAN });
    }

    pub fn finish(mut self, exhaustive: bool, h_param: Option<f64>, descriptor: String) -> ConditionReport {
        let n_failed = self.failures.len();
        let verdict = if n_failed > 0 {
            Verdict::Fails
        } else if self.n_checked == 0 {
            Verdict::Vacuous
        } else if exhaustive {
            Verdict::Holds
        } else {
            Verdict::HoldsOnSample
        };
        let mut witnesses =
            if n_failed > 0 { core::mem::take(&mut self.failures) } else { self.tightest.into_iter().collect() };
        witnesses.sort_by(witness_order);
        witnesses.truncate(MAX_WITNESSES);
        self.preconditions.sort_by(|a, b| cmp_point_lists(&a.points, &b.points));
        self.preconditions.truncate(MAX_WITNESSES);
        ConditionReport {
            condition_id: self.condition,
            verdict,
            h_param,
            witnesses,
            n_checked: self.n_checked,
            n_failed,
            precondition_failures: self.preconditions,
            sample_descriptor: descriptor,
        }
    }
}

fn witness_order(a: &Witness, b: &Witness) -> core::cmp::Ordering {
    a.margin.total_cmp(&b.margin).then_with(|| cmp_point_lists(&a.points, &b.points))
}

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{CheckOptions, CircleSample, ConditionId, ConditionReport, FixedCircleVerdict, Relation, Tally};
use crate::error::{Error, Result};
use crate::geometry::Circle;
use crate::mappings::{PiecewiseMap, GUARD_CIRCLE_TOL};
use crate::metric::SMetricSpec;
use crate::point::Point;

/// Reports for the two hypotheses of an existence theorem together with the
/// observed fixedness of the circle.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExistenceOutcome {
    pub first: ConditionReport,
    pub second: ConditionReport,
    pub fixed: FixedCircleVerdict,
}

impl ExistenceOutcome {
    pub fn both_hold(&self) -> bool {
        self.first.verdict.holds() && self.second.verdict.holds()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IdentityOutcome {
    pub report: ConditionReport,
    /// Every sample point satisfies `S(x, x, Tx) ≤ tol·h/(h − 2)`.
    pub identity_on_sample: bool,
}

struct Evaluated {
    x: Point,
    /// `S(x, x, Tx)`
    disp: f64,
    phi_x: f64,
    phi_tx: f64,
}

/// Applies the map at each circle point and returns the comparison slack,
/// widened by twice the worst membership residual so that traced points
/// lying within the band still count as on the circle.
fn evaluate_on_circle(
    map: &PiecewiseMap,
    circle: &Circle,
    sample: &CircleSample,
    opts: &CheckOptions,
) -> Result<(Vec<Evaluated>, f64)> {
    let metric = circle.metric();
    let mut worst = 0.0f64;
    let mut out = Vec::with_capacity(sample.points.len());
    for x in &sample.points {
        let m = circle.membership(x, GUARD_CIRCLE_TOL)?;
        if !m.member {
            return Err(Error::NotOnCircle { residual: m.residual });
        }
        worst = worst.max(m.residual.abs());
        let tx = map.apply(x)?;
        out.push(Evaluated {
            disp: metric.self_distance(x, &tx)?,
            phi_x: circle.phi(x)?,
            phi_tx: circle.phi(&tx)?,
            x: x.clone(),
        });
    }
    Ok((out, opts.tol + 2.0 * worst))
}

fn fixed_verdict(evals: &[Evaluated], circle: &Circle, tol: f64) -> FixedCircleVerdict {
    let max_displacement = evals.iter().fold(0.0f64, |m, e| m.max(e.disp));
    FixedCircleVerdict {
        circle: circle.clone(),
        fixed: !evals.is_empty() && max_displacement <= tol,
        checked_points: evals.len(),
        max_displacement,
        uniqueness: None,
        ball_fixed: None,
    }
}

/// Checks `thm1_S1` and `thm1_S2` at every point of `sample`.
pub fn check_thm1(
    map: &PiecewiseMap,
    circle: &Circle,
    sample: &CircleSample,
    opts: &CheckOptions,
) -> Result<ExistenceOutcome> {
    let (evals, slack) = evaluate_on_circle(map, circle, sample, opts)?;
    let r = circle.radius();
    let mut s1 = Tally::new(ConditionId::Thm1S1, Relation::Le, slack);
    let mut s2 = Tally::new(ConditionId::Thm1S2, Relation::Le, slack);
    for e in &evals {
        s1.push(vec![e.x.clone()], e.disp, e.phi_x + e.phi_tx - 2.0 * r);
        s2.push(vec![e.x.clone()], e.disp + e.phi_tx, r);
    }
    let d = &sample.descriptor;
    Ok(ExistenceOutcome {
        first: s1.finish(sample.exhaustive, None, d.clone()),
        second: s2.finish(sample.exhaustive, None, d.clone()),
        fixed: fixed_verdict(&evals, circle, opts.tol),
    })
}

/// Checks `thm2_S1` and `thm2_S2` for a given `h ∈ [0, 1)`.
pub fn check_thm2(
    map: &PiecewiseMap,
    circle: &Circle,
    sample: &CircleSample,
    h: f64,
    opts: &CheckOptions,
) -> Result<ExistenceOutcome> {
    if !(0.0..1.0).contains(&h) {
        return Err(Error::HOutOfRange { h, expected: "[0, 1)" });
    }
    let (evals, slack) = evaluate_on_circle(map, circle, sample, opts)?;
    let r = circle.radius();
    let mut s1 = Tally::new(ConditionId::Thm2S1, Relation::Le, slack);
    let mut s2 = Tally::new(ConditionId::Thm2S2, Relation::Ge, slack);
    for e in &evals {
        s1.push(vec![e.x.clone()], e.disp, e.phi_x - e.phi_tx);
        s2.push(vec![e.x.clone()], h * e.disp + e.phi_tx, r);
    }
    let d = &sample.descriptor;
    Ok(ExistenceOutcome {
        first: s1.finish(sample.exhaustive, Some(h), d.clone()),
        second: s2.finish(sample.exhaustive, Some(h), d.clone()),
        fixed: fixed_verdict(&evals, circle, opts.tol),
    })
}

/// Runs [`check_thm2`] for each `h` in `hs`, in order.
pub fn sweep_thm2_h(
    map: &PiecewiseMap,
    circle: &Circle,
    sample: &CircleSample,
    hs: &[f64],
    opts: &CheckOptions,
) -> Result<Vec<ExistenceOutcome>> {
    hs.iter().map(|&h| check_thm2(map, circle, sample, h, opts)).collect()
}

/// Checks `I_S` for `h > 2` over a domain sample (the condition quantifies
/// over the whole space, not just a circle).
///
/// Since `φ(x) − φ(Tx) ≤ 2·S(x, x, Tx)` in any S-metric space, a point
/// passing `I_S` with slack `tol` has displacement at most `tol·h/(h − 2)`;
/// that bound is the threshold used for `identity_on_sample`.
pub fn check_identity_condition(
    map: &PiecewiseMap,
    metric: &SMetricSpec,
    center: &Point,
    h: f64,
    sample: &[Point],
    opts: &CheckOptions,
) -> Result<IdentityOutcome> {
    if !(h > 2.0 && h.is_finite()) {
        return Err(Error::HOutOfRange { h, expected: "(2, inf)" });
    }
    center.ensure_dim(metric.dimension())?;
    let threshold = opts.tol * h / (h - 2.0);
    let mut tally = Tally::new(ConditionId::IdentityIs, Relation::Le, opts.tol);
    let mut identity = true;
    for x in sample {
        let tx = map.apply(x)?;
        let disp = metric.self_distance(x, &tx)?;
        let rhs = (metric.self_distance(x, center)? - metric.self_distance(&tx, center)?) / h;
        tally.push(vec![x.clone()], disp, rhs);
        identity &= disp <= threshold;
    }
    Ok(IdentityOutcome {
        report: tally.finish(false, Some(h), format!("{} domain points, center {}", sample.len(), center)),
        identity_on_sample: identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::parse_map;
    use crate::theorems::Verdict;

    fn s(x: f64) -> Point {
        Point::scalar(x)
    }

    fn circle(c: f64, r: f64, m: SMetricSpec) -> Circle {
        Circle::new(s(c), r, m).unwrap()
    }

    #[test]
    fn thm1_on_exm7_map() {
        let m = SMetricSpec::sym_skew_1d();
        let t3 = parse_map("x = -3/2 -> -7/2 ; x = 3/2 -> 7/2 ; otherwise -> 7", 1, None).unwrap();
        let c = circle(0.0, 3.0, m);
        let out = check_thm1(&t3, &c, &CircleSample::analytic(&c).unwrap(), &CheckOptions::default()).unwrap();
        assert_eq!(out.first.verdict, Verdict::Holds);
        assert_eq!(out.second.verdict, Verdict::Fails);
        let w = &out.second.witnesses[0];
        assert_eq!((w.lhs, w.rhs), (11.0, 3.0));
        assert!(!out.fixed.fixed);
    }

    #[test]
    fn thm2_rejects_bad_h() {
        let c = circle(1.0, 2.0, SMetricSpec::usual_1d());
        let id = PiecewiseMap::identity(1);
        let sample = CircleSample::analytic(&c).unwrap();
        for h in [-0.1, 1.0, f64::NAN] {
            assert!(matches!(
                check_thm2(&id, &c, &sample, h, &CheckOptions::default()),
                Err(Error::HOutOfRange { .. })
            ));
        }
        let sweep = sweep_thm2_h(&id, &c, &sample, &[0.0, 0.5, 0.9], &CheckOptions::default()).unwrap();
        assert!(sweep.iter().all(|o| o.both_hold() && o.fixed.fixed));
    }

    #[test]
    fn empty_sample_is_vacuous() {
        let c = circle(0.0, 1.0, SMetricSpec::usual_1d());
        let sample = CircleSample::from_points(Vec::new(), false, "none");
        let out = check_thm1(&PiecewiseMap::identity(1), &c, &sample, &CheckOptions::default()).unwrap();
        assert_eq!(out.first.verdict, Verdict::Vacuous);
        assert!(!out.fixed.fixed);
    }

    #[test]
    fn off_circle_point_is_rejected() {
        let c = circle(0.0, 1.0, SMetricSpec::usual_1d());
        let sample = CircleSample::from_points(vec![s(3.0)], false, "bad");
        assert!(matches!(
            check_thm1(&PiecewiseMap::identity(1), &c, &sample, &CheckOptions::default()),
            Err(Error::NotOnCircle { .. })
        ));
    }

    #[test]
    fn identity_condition_hand_values() {
        let m = SMetricSpec::usual_1d();
        let opts = CheckOptions::default();
        let t1 = parse_map("x in {-1, 1} -> x ; otherwise -> 10", 1, None).unwrap();
        let out = check_identity_condition(&t1, &m, &s(0.0), 3.0, &[s(0.0)], &opts).unwrap();
        assert_eq!(out.report.verdict, Verdict::Fails);
        assert_eq!(out.report.witnesses[0].lhs, 20.0);
        assert!(!out.identity_on_sample);

        let shift = parse_map("otherwise -> x + 1", 1, None).unwrap();
        let out = check_identity_condition(&shift, &m, &s(0.0), 2.5, &[s(1.0)], &opts).unwrap();
        assert_eq!(out.report.verdict, Verdict::Fails);
        let w = &out.report.witnesses[0];
        assert_eq!((w.lhs, w.rhs), (2.0, (2.0 - 4.0) / 2.5));

        let id = PiecewiseMap::identity(1);
        let out = check_identity_condition(&id, &m, &s(0.0), 3.0, &[s(1.0), s(-4.0)], &opts).unwrap();
        assert_eq!(out.report.verdict, Verdict::HoldsOnSample);
        assert!(out.identity_on_sample);
        assert!(check_identity_condition(&id, &m, &s(0.0), 2.0, &[], &opts).is_err());
    }
}

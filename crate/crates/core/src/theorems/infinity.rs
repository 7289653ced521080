use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{CheckOptions, CircleSample, ConditionId, ConditionReport, FixedCircleVerdict, Relation, Tally};
use crate::error::{Error, Result};
use crate::geometry::Circle;
use crate::mappings::PiecewiseMap;
use crate::metric::SMetricSpec;
use crate::point::Point;

/// `max{S(x,x,y), S(Tx,Tx,x), S(Ty,Ty,y), S(Ty,Ty,x), S(Tx,Tx,y)}`.
pub fn compute_r_s(map: &PiecewiseMap, metric: &SMetricSpec, x: &Point, y: &Point) -> Result<f64> {
    let tx = map.apply(x)?;
    let ty = map.apply(y)?;
    let terms = [
        metric.self_distance(x, y)?,
        metric.self_distance(&tx, x)?,
        metric.self_distance(&ty, y)?,
        metric.self_distance(&ty, x)?,
        metric.self_distance(&tx, y)?,
    ];
    Ok(terms.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Thm6Outcome {
    /// Smallest sampled displacement `S(Tx, Tx, x)` among non-fixed points.
    pub r: f64,
    /// The displacement is constant on the sampled non-fixed points, so `r`
    /// does not depend on the sample. Otherwise it is only an upper bound
    /// for the true minimum.
    pub r_exact: bool,
    pub eqn1: ConditionReport,
    pub eqn2: ConditionReport,
    /// `S(Tx, Tx, x0) = S(x, x, x0)` at sampled points strictly inside the
    /// circle, i.e. the radius-ρ form of `eqn2` on each inner circle.
    pub eqn2_inner: ConditionReport,
    /// Fixedness of `C(x0, r)`, with `ball_fixed` covering the sampled
    /// closed ball `B[x0, r]`.
    pub circle: FixedCircleVerdict,
    pub ball_points: usize,
}

/// Evaluates the minimal-displacement fixed-circle theorem at `center`.
pub fn check_thm6(
    map: &PiecewiseMap,
    metric: &SMetricSpec,
    center: &Point,
    domain: &[Point],
    opts: &CheckOptions,
) -> Result<Thm6Outcome> {
    if domain.is_empty() {
        return Err(Error::EmptySample);
    }
    center.ensure_dim(metric.dimension())?;
    let mut images = Vec::with_capacity(domain.len());
    let (mut r, mut r_max) = (f64::INFINITY, 0.0f64);
    for x in domain {
        let tx = map.apply(x)?;
        let d = metric.self_distance(&tx, x)?;
        if d > opts.tol {
            r = r.min(d);
            r_max = r_max.max(d);
        }
        images.push((tx, d));
    }
    if r.is_infinite() {
        return Err(Error::RUndefined);
    }
    let r_exact = r_max - r <= opts.tol;
    let descriptor = format!("{} domain points, center {}", domain.len(), center);

    let mut eqn1 = Tally::new(ConditionId::Eqn1, Relation::Lt, opts.tol_strict);
    for (x, (tx, d)) in domain.iter().zip(&images) {
        if *d > opts.tol {
            let lhs = metric.self_distance(x, tx)?;
            eqn1.push(vec![x.clone()], lhs, compute_r_s(map, metric, x, center)?);
        }
    }

    let circle = Circle::new(center.clone(), r, metric.clone())?;
    let on_circle = CircleSample::best_effort(&circle, domain, opts.tol)?;
    let mut eqn2 = Tally::new(ConditionId::Eqn2, Relation::Eq, opts.tol);
    for x in &on_circle.points {
        eqn2.push(vec![x.clone()], circle.phi(&map.apply(x)?)?, r);
    }

    let mut eqn2_inner = Tally::new(ConditionId::Eqn2Inner, Relation::Eq, opts.tol);
    let mut ball_points = on_circle.points.clone();
    for (x, (tx, _)) in domain.iter().zip(&images) {
        let rho = circle.phi(x)?;
        if rho <= r + opts.tol && !ball_points.iter().any(|p| p == x) {
            ball_points.push(x.clone());
        }
        if rho > opts.tol && rho < r - opts.tol {
            eqn2_inner.push(vec![x.clone()], circle.phi(tx)?, rho);
        }
    }
    let mut verdict = FixedCircleVerdict::evaluate(map, &circle, &on_circle.points, opts.tol)?;
    verdict.ball_fixed = Some(super::max_displacement(map, metric, &ball_points)? <= opts.tol);

    Ok(Thm6Outcome {
        r,
        r_exact,
        eqn1: eqn1.finish(false, None, descriptor.clone()),
        eqn2: eqn2.finish(on_circle.exhaustive, None, on_circle.descriptor.clone()),
        eqn2_inner: eqn2_inner.finish(false, None, descriptor),
        circle: verdict,
        ball_points: ball_points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{exm2_map, parse_map};
    use crate::sampling::Window;
    use crate::theorems::Verdict;

    fn s(x: f64) -> Point {
        Point::scalar(x)
    }

    fn exm1() -> PiecewiseMap {
        parse_map("abs(x) >= 3 -> x + 2 ; otherwise -> x", 1, None).unwrap()
    }

    #[test]
    fn r_s_values() {
        let m = SMetricSpec::usual_1d();
        let t1 = parse_map("x in {-1, 1} -> x ; otherwise -> 10", 1, None).unwrap();
        assert_eq!(compute_r_s(&t1, &m, &s(0.0), &s(0.0)).unwrap(), 20.0);
        assert_eq!(compute_r_s(&t1, &m, &s(1.0), &s(1.0)).unwrap(), 0.0);
        for x in [3.0, 4.5, -3.0, -6.0] {
            let want = [2.0 * f64::abs(x), 4.0, 0.0, 2.0 * f64::abs(x), 2.0 * f64::abs(x + 2.0)]
                .into_iter()
                .fold(0.0, f64::max);
            assert_eq!(compute_r_s(&exm1(), &m, &s(x), &s(0.0)).unwrap(), want);
        }
    }

    #[test]
    fn exm1_minimal_radius() {
        let m = SMetricSpec::usual_1d();
        for step in [1.0, 0.5, 0.25] {
            let grid = Window::interval(-6.0, 6.0).unwrap().grid_step(step).unwrap();
            let out = check_thm6(&exm1(), &m, &s(0.0), &grid, &CheckOptions::default()).unwrap();
            assert_eq!(out.r, 4.0);
            assert!(out.r_exact);
            assert_eq!(out.eqn1.verdict, Verdict::HoldsOnSample);
            assert!(out.eqn1.witnesses.iter().all(|w| w.margin > 0.0));
            assert_eq!(out.eqn2.verdict, Verdict::Holds);
            assert!(out.circle.fixed);
            assert_eq!(out.circle.ball_fixed, Some(true));
        }
    }

    #[test]
    fn exm2_eqn1_ties() {
        let m = SMetricSpec::usual_1d();
        let grid = Window::interval(-2.0, 2.0).unwrap().grid_step(0.125).unwrap();
        let out = check_thm6(&exm2_map(1.0), &m, &s(0.0), &grid, &CheckOptions::default()).unwrap();
        assert_eq!(out.eqn1.verdict, Verdict::Fails);
        assert_eq!(out.eqn1.witnesses[0].margin, 0.0);
        assert!(!out.r_exact);
    }

    #[test]
    fn identity_has_no_radius() {
        let grid = [s(0.0), s(1.0)];
        let err =
            check_thm6(&PiecewiseMap::identity(1), &SMetricSpec::usual_1d(), &s(0.0), &grid, &CheckOptions::default());
        assert!(matches!(err, Err(Error::RUndefined)));
    }
}

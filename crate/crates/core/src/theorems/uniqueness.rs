use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{CheckOptions, CircleSample, ConditionId, ConditionReport, Relation, Tally};
use crate::error::Result;
use crate::geometry::{diameter, orbit, Circle, OrbitSet};
use crate::mappings::{PiecewiseMap, GUARD_CIRCLE_TOL};
use crate::point::Point;

/// Off-circle candidates of `others`, deduplicated against the circle points.
fn off_circle(circle: &Circle, on: &[Point], others: &[Point]) -> Result<Vec<Point>> {
    let mut ys = Vec::new();
    for y in others {
        if circle.contains(y, GUARD_CIRCLE_TOL)? || on.iter().any(|x| x.max_abs_diff(y) <= crate::DEFAULT_POINT_TOL) {
            continue;
        }
        ys.push(y.clone());
    }
    Ok(ys)
}

fn descriptor(on: &CircleSample, n_off: usize) -> alloc::string::String {
    format!("{} circle points ({}) x {} off-circle points", on.points.len(), on.descriptor, n_off)
}

/// Checks the strict five-term contractive inequality
/// `S(Tx,Tx,Ty) < max{S(x,x,y), S(Tx,Tx,x), S(Ty,Ty,y), S(Ty,Ty,x), S(Tx,Tx,y)}`
/// for `x` on the circle and `y` in `others` but off the circle.
pub fn check_rhoades_uniqueness(
    map: &PiecewiseMap,
    circle: &Circle,
    on_circle: &CircleSample,
    others: &[Point],
    opts: &CheckOptions,
) -> Result<ConditionReport> {
    let metric = circle.metric();
    let ys = off_circle(circle, &on_circle.points, others)?;
    let tys = ys.iter().map(|y| map.apply(y)).collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::new(ConditionId::RhoadesS25, Relation::Lt, opts.tol_strict);
    for x in &on_circle.points {
        let tx = map.apply(x)?;
        let txx = metric.self_distance(&tx, x)?;
        for (y, ty) in ys.iter().zip(&tys) {
            let rhs = metric
                .self_distance(x, y)?
                .max(txx)
                .max(metric.self_distance(ty, y)?)
                .max(metric.self_distance(ty, x)?)
                .max(metric.self_distance(&tx, y)?);
            tally.push(vec![x.clone(), y.clone()], metric.self_distance(&tx, ty)?, rhs);
        }
    }
    Ok(tally.finish(false, None, descriptor(on_circle, ys.len())))
}

/// Checks `S(Tx,Tx,Ty) < diam(U_x ∪ U_y)` over the same pairs as
/// [`check_rhoades_uniqueness`]. Pairs where either orbit escapes are
/// recorded as precondition failures and not counted as checked.
pub fn check_diameter_uniqueness(
    map: &PiecewiseMap,
    circle: &Circle,
    on_circle: &CircleSample,
    others: &[Point],
    opts: &CheckOptions,
) -> Result<ConditionReport> {
    let metric = circle.metric();
    let ys = off_circle(circle, &on_circle.points, others)?;
    let mut orbits: BTreeMap<usize, OrbitSet> = BTreeMap::new();
    let n = on_circle.points.len();
    for (i, p) in on_circle.points.iter().chain(&ys).enumerate() {
        orbits.insert(i, orbit(map, metric, p, &opts.orbit)?);
    }
    let mut tally = Tally::new(ConditionId::DiamS25a, Relation::Lt, opts.tol_strict);
    for (i, x) in on_circle.points.iter().enumerate() {
        let ux = &orbits[&i];
        for (j, y) in ys.iter().enumerate() {
            let uy = &orbits[&(n + j)];
            let tx = ux.iterates.first().cloned().unwrap_or_else(|| x.clone());
            let ty = uy.iterates.first().cloned().unwrap_or_else(|| y.clone());
            let lhs = metric.self_distance(&tx, &ty)?;
            let pair = vec![x.clone(), y.clone()];
            if ux.unbounded || uy.unbounded {
                tally.precondition_failure(pair, lhs, f64::INFINITY);
                continue;
            }
            let union: Vec<Point> = ux.iterates.iter().chain(&uy.iterates).cloned().collect();
            tally.push(pair, lhs, diameter(metric, &union)?);
        }
    }
    Ok(tally.finish(false, None, descriptor(on_circle, ys.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{make_multi_circle_map, parse_map};
    use crate::metric::SMetricSpec;
    use crate::theorems::Verdict;

    fn s(x: f64) -> Point {
        Point::scalar(x)
    }

    fn t1() -> PiecewiseMap {
        parse_map("x in {-1, 1} -> x ; otherwise -> 10", 1, None).unwrap()
    }

    #[test]
    fn rhoades_tie_on_second_fixed_circle() {
        let c = Circle::new(s(0.0), 2.0, SMetricSpec::usual_1d()).unwrap();
        let on = CircleSample::analytic(&c).unwrap();
        let r = check_rhoades_uniqueness(&t1(), &c, &on, &[s(10.0)], &CheckOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let w = &r.witnesses[0];
        assert_eq!((w.lhs, w.rhs, w.margin), (22.0, 22.0, 0.0));
        assert_eq!(w.points, vec![s(-1.0), s(10.0)]);
        assert_eq!(r.n_checked, 2);
    }

    #[test]
    fn circle_points_among_others_are_skipped() {
        let c = Circle::new(s(0.0), 2.0, SMetricSpec::usual_1d()).unwrap();
        let on = CircleSample::analytic(&c).unwrap();
        let r = check_rhoades_uniqueness(&t1(), &c, &on, &[s(1.0), s(-1.0)], &CheckOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Vacuous);
    }

    #[test]
    fn diameter_condition_on_t1() {
        let c = Circle::new(s(0.0), 2.0, SMetricSpec::usual_1d()).unwrap();
        let on = CircleSample::analytic(&c).unwrap();
        let r = check_diameter_uniqueness(&t1(), &c, &on, &[s(10.0)], &CheckOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let w = &r.witnesses[0];
        assert_eq!((w.lhs, w.rhs), (22.0, 22.0));
    }

    #[test]
    fn identity_fails_diameter_condition() {
        let c = Circle::new(s(0.0), 2.0, SMetricSpec::usual_1d()).unwrap();
        let on = CircleSample::analytic(&c).unwrap();
        let others = [s(0.0), s(3.0), s(-7.5)];
        let r =
            check_diameter_uniqueness(&PiecewiseMap::identity(1), &c, &on, &others, &CheckOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.n_failed, 6);
        assert!(r.witnesses.iter().all(|w| w.margin == 0.0));
    }

    #[test]
    fn multi_circle_map_single_circle() {
        let m = SMetricSpec::usual_1d();
        let c = Circle::new(s(0.0), 2.0, m).unwrap();
        let map = make_multi_circle_map(core::slice::from_ref(&c), &s(0.0)).unwrap();
        let on = CircleSample::analytic(&c).unwrap();
        let r = check_diameter_uniqueness(&map, &c, &on, &[s(5.0)], &CheckOptions::default()).unwrap();
        // U_x = {x}, U_y = {0}: LHS S(x,x,0) = 2 against diam{x, 0} = 2.
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.witnesses[0].lhs, 2.0);
    }

    #[test]
    fn escaping_orbits_are_preconditions() {
        let c = Circle::new(s(0.0), 4.0, SMetricSpec::usual_1d()).unwrap();
        let map = parse_map("abs(x) >= 3 -> x + 2 ; otherwise -> x", 1, None).unwrap();
        let on = CircleSample::analytic(&c).unwrap();
        let mut opts = CheckOptions::default();
        opts.orbit.n_max = 10;
        opts.orbit.escape_bound = 15.0;
        let r = check_diameter_uniqueness(&map, &c, &on, &[s(3.0), s(1.0)], &opts).unwrap();
        assert_eq!(r.precondition_failures.len(), 2);
        assert_eq!(r.n_checked, 2);
    }
}

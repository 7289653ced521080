use alloc::vec::Vec;

use super::{CheckOptions, FixedCircleVerdict};
use crate::error::Result;
use crate::geometry::{solve_circle_1d, Circle};
use crate::mappings::{fixed_point_set, PiecewiseMap};
use crate::metric::SMetricSpec;
use crate::point::Point;

/// Brute-force search for fixed circles centred at each of `centers`.
///
/// Every radius `S(p, p, c) > 0` realised by a fixed point `p` of the sample
/// is a candidate. A candidate is reported when all of its points are fixed:
/// for metrics with a closed-form 1D circle the exact circle points are
/// checked, otherwise the sample points lying on the circle.
pub fn discover_fixed_circles(
    map: &PiecewiseMap,
    metric: &SMetricSpec,
    sample: &[Point],
    centers: &[Point],
    opts: &CheckOptions,
) -> Result<Vec<FixedCircleVerdict>> {
    let fixed = fixed_point_set(map, metric, sample, opts.tol);
    let mut found = Vec::new();
    for c in centers {
        c.ensure_dim(metric.dimension())?;
        let mut radii = fixed.iter().map(|p| metric.self_distance(p, c)).collect::<Result<Vec<f64>>>()?;
        radii.retain(|r| *r > opts.tol);
        radii.sort_by(f64::total_cmp);
        radii.dedup_by(|b, a| *b - *a <= opts.tol * a.abs().max(1.0));
        for r in radii {
            let circle = Circle::new(c.clone(), r, metric.clone())?;
            let points = if metric.has_linear_self_distance() {
                solve_circle_1d(metric, c, r)?.points
            } else {
                let mut on = Vec::new();
                for p in sample {
                    if circle.contains(p, opts.tol)? {
                        on.push(p.clone());
                    }
                }
                on
            };
            let verdict = FixedCircleVerdict::evaluate(map, &circle, &points, opts.tol)?;
            if verdict.fixed {
                found.push(verdict);
            }
        }
    }
    found.sort_by(|a, b| {
        a.circle.center().cmp_lex(b.circle.center()).then(a.circle.radius().total_cmp(&b.circle.radius()))
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::parse_map;
    use crate::sampling::Window;

    fn s(x: f64) -> Point {
        Point::scalar(x)
    }

    fn circles(v: &[FixedCircleVerdict]) -> Vec<(f64, f64)> {
        v.iter().map(|f| (f.circle.center().coords()[0], f.circle.radius())).collect()
    }

    #[test]
    fn t1_has_two_fixed_circles() {
        let t1 = parse_map("x in {-1, 1} -> x ; otherwise -> 10", 1, None).unwrap();
        let grid = Window::interval(-12.0, 12.0).unwrap().grid_step(0.5).unwrap();
        let found =
            discover_fixed_circles(&t1, &SMetricSpec::usual_1d(), &grid, &[s(0.0), s(4.5)], &CheckOptions::default())
                .unwrap();
        assert_eq!(circles(&found), vec![(0.0, 2.0), (4.5, 11.0)]);
    }

    #[test]
    fn shift_has_none() {
        let shift = parse_map("otherwise -> x + 1", 1, None).unwrap();
        let grid = Window::interval(-3.0, 3.0).unwrap().grid_step(0.25).unwrap();
        let found =
            discover_fixed_circles(&shift, &SMetricSpec::usual_1d(), &grid, &[s(0.0)], &CheckOptions::default())
                .unwrap();
        assert!(found.is_empty());
    }
}

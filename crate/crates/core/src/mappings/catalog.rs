//! The worked examples: each entry carries its map, metric, documented
//! circles and the condition verdicts stated for it.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{make_multi_circle_map, parse_map, PiecewiseMap};
use crate::geometry::Circle;
use crate::metric::SMetricSpec;
use crate::point::Point;
use crate::theorems::ConditionId;

/// A condition and the verdict stated for it on circle `circle`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedVerdict {
    pub condition: ConditionId,
    pub circle: usize,
    pub holds: bool,
    pub h: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentedCircle {
    pub circle: Circle,
    /// Points listed explicitly for 1D circles.
    pub points: Option<Vec<Point>>,
    /// Whether the map fixes this circle.
    pub fixed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapCatalogEntry {
    pub name: &'static str,
    pub example: &'static str,
    pub source: String,
    pub map: PiecewiseMap,
    pub metric: SMetricSpec,
    pub circles: Vec<DocumentedCircle>,
    pub expected: Vec<ExpectedVerdict>,
}

pub const CATALOG_NAMES: &[&str] =
    &["T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T10", "exm1", "exm2", "intro"];

fn s(x: f64) -> Point {
    Point::scalar(x)
}

fn circle(center: Point, r: f64, metric: &SMetricSpec) -> Circle {
    Circle::new(center, r, metric.clone()).expect("catalog circle")
}

fn doc(c: Circle, points: Option<&[f64]>, fixed: bool) -> DocumentedCircle {
    DocumentedCircle { circle: c, points: points.map(|p| p.iter().map(|x| s(*x)).collect()), fixed }
}

fn expect(condition: ConditionId, circle: usize, holds: bool) -> ExpectedVerdict {
    ExpectedVerdict { condition, circle, holds, h: None }
}

fn expect_h(condition: ConditionId, circle: usize, holds: bool, h: f64) -> ExpectedVerdict {
    ExpectedVerdict { condition, circle, holds, h: Some(h) }
}

struct Builder {
    name: &'static str,
    example: &'static str,
    metric: SMetricSpec,
    map: PiecewiseMap,
}

impl Builder {
    fn dsl(name: &'static str, example: &'static str, metric: SMetricSpec, src: &str) -> Self {
        let map = parse_map(src, metric.dimension(), Some(&metric))
            .unwrap_or_else(|e| panic!("catalog map {name}: {e}"))
            .with_name(name);
        Builder { name, example, metric, map }
    }

    fn built(name: &'static str, example: &'static str, metric: SMetricSpec, map: PiecewiseMap) -> Self {
        Builder { name, example, metric, map: map.with_name(name) }
    }

    fn finish(self, circles: Vec<DocumentedCircle>, expected: Vec<ExpectedVerdict>) -> MapCatalogEntry {
        MapCatalogEntry {
            name: self.name,
            example: self.example,
            source: self.map.source(),
            map: self.map,
            metric: self.metric,
            circles,
            expected,
        }
    }
}

/// The `exm2` map: identity on `B[x0, μ]`, constant `x0` outside,
/// on the usual S-metric with `x0 = 0`.
pub fn exm2_map(mu: f64) -> PiecewiseMap {
    let metric = SMetricSpec::usual_1d();
    parse_map(&format!("in_ball(0, {mu}) -> x ; otherwise -> 0"), 1, Some(&metric))
        .expect("mu must be positive")
        .with_name("exm2")
}

pub fn catalog() -> Vec<MapCatalogEntry> {
    use ConditionId::*;
    let usual = SMetricSpec::usual_1d();
    let skew1 = SMetricSpec::sym_skew_1d();
    let skew2 = SMetricSpec::sym_skew_2d();
    let exp2 = SMetricSpec::exp_2d();
    let half = SMetricSpec::half_sum(2);
    let origin = Point::xy(0.0, 0.0);

    let t9_circles = [circle(s(0.0), 2.0, &skew1), circle(s(0.0), 4.0, &skew1)];
    let t9 = make_multi_circle_map(&t9_circles, &s(5.0)).expect("alpha off both circles");
    let t10_circles = [circle(s(0.0), 2.0, &usual), circle(s(1.0), 2.0, &usual), circle(s(4.5), 11.0, &usual)];
    let t10 = make_multi_circle_map(&t10_circles, &s(5.0)).expect("x0 off all circles");

    vec![
        Builder::dsl("T1", "exm6", usual.clone(), "x in {-1, 1} -> x ; otherwise -> 10").finish(
            vec![
                doc(circle(s(0.0), 2.0, &usual), Some(&[-1.0, 1.0]), true),
                doc(circle(s(4.5), 11.0, &usual), Some(&[-1.0, 10.0]), true),
            ],
            vec![expect(Thm1S1, 0, true), expect(Thm1S2, 0, true)],
        ),
        Builder::dsl("T2", "exm13", skew2.clone(), "on_circle((0, 0), 1) -> x1, x2 ; otherwise -> 1, 0").finish(
            vec![doc(circle(origin.clone(), 1.0, &skew2), None, true)],
            vec![expect(Thm1S1, 0, true), expect(Thm1S2, 0, true)],
        ),
        Builder::dsl("T3", "exm7", skew1.clone(), "x = -3/2 -> -7/2 ; x = 3/2 -> 7/2 ; otherwise -> 7").finish(
            vec![doc(circle(s(0.0), 3.0, &skew1), None, false)],
            vec![expect(Thm1S1, 0, true), expect(Thm1S2, 0, false)],
        ),
        Builder::dsl("T4", "exm8", usual.clone(), "otherwise -> 0").finish(
            vec![doc(circle(s(0.0), 2.0, &usual), None, false)],
            vec![expect(Thm1S1, 0, false), expect(Thm1S2, 0, true)],
        ),
        Builder::dsl("T5", "exm9", usual.clone(), "x = 0 -> exp(x) - 1 ; x = 2 -> 2*x - 2 ; otherwise -> 3").finish(
            vec![doc(circle(s(1.0), 2.0, &usual), Some(&[0.0, 2.0]), true)],
            vec![expect_h(Thm2S1, 0, true, 0.0), expect_h(Thm2S2, 0, true, 0.0)],
        ),
        Builder::dsl("T6", "exm14", exp2.clone(), "on_circle((0, 0), 2) -> x1, x2 ; otherwise -> ln(2), 0").finish(
            vec![doc(circle(origin.clone(), 2.0, &exp2), None, true)],
            vec![expect_h(Thm2S1, 0, true, 0.0), expect_h(Thm2S2, 0, true, 0.0)],
        ),
        Builder::dsl("T7", "exm10", usual.clone(), "otherwise -> 1").finish(
            vec![doc(circle(s(1.0), 2.0, &usual), Some(&[0.0, 2.0]), false)],
            vec![expect_h(Thm2S1, 0, true, 0.0), expect_h(Thm2S2, 0, false, 0.0)],
        ),
        Builder::dsl("T8", "exm11", skew1.clone(), "otherwise -> 1").finish(
            vec![doc(circle(s(0.0), 1.0, &skew1), None, false)],
            vec![expect_h(Thm2S1, 0, false, 0.0), expect_h(Thm2S2, 0, true, 0.0)],
        ),
        Builder::built("T9", "exm12", skew1.clone(), t9).finish(
            vec![
                doc(t9_circles[0].clone(), Some(&[-1.0, 1.0]), true),
                doc(t9_circles[1].clone(), Some(&[-2.0, 2.0]), true),
            ],
            vec![expect(Thm1S1, 0, true), expect(Thm1S2, 0, true), expect(Thm1S1, 1, true), expect(Thm1S2, 1, true)],
        ),
        Builder::built("T10", "exm15", usual.clone(), t10).finish(
            t10_circles.iter().map(|c| doc(c.clone(), None, true)).collect(),
            (0..3).flat_map(|i| [expect_h(Thm2S1, i, true, 0.0), expect_h(Thm2S2, i, true, 0.0)]).collect(),
        ),
        Builder::dsl("exm1", "exm1", usual.clone(), "abs(x) >= 3 -> x + 2 ; otherwise -> x").finish(
            vec![doc(circle(s(0.0), 4.0, &usual), Some(&[-2.0, 2.0]), true)],
            vec![expect(Eqn1, 0, true), expect(Eqn2, 0, true)],
        ),
        Builder::built("exm2", "exm2", usual.clone(), exm2_map(1.0)).finish(
            [0.25, 0.5, 0.75, 1.0].iter().map(|rho| doc(circle(s(0.0), *rho, &usual), None, true)).collect(),
            vec![expect(Eqn1, 0, false)],
        ),
        Builder::dsl("intro", "intro", half.clone(), "otherwise -> x1 / (x1*x1 + x2*x2), x2 / (x1*x1 + x2*x2)")
            .finish(vec![doc(circle(origin, 1.0, &half), None, true)], vec![]),
    ]
}

pub fn lookup(name: &str) -> Option<MapCatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::solve_circle_1d;

    #[test]
    fn thirteen_entries_in_order() {
        let names: Vec<&str> = catalog().iter().map(|e| e.name).collect();
        assert_eq!(names, CATALOG_NAMES);
        assert!(lookup("T99").is_none());
    }

    #[test]
    fn documented_points_are_solvable() {
        for entry in catalog() {
            for dc in &entry.circles {
                if let Some(points) = &dc.points {
                    let sol = solve_circle_1d(&entry.metric, dc.circle.center(), dc.circle.radius()).unwrap();
                    assert_eq!(&sol.points, points, "{}", entry.name);
                }
            }
        }
    }

    #[test]
    fn sources_round_trip() {
        for entry in catalog() {
            let parsed =
                parse_map(&entry.source, entry.metric.dimension(), Some(&entry.metric)).unwrap().with_name(entry.name);
            assert_eq!(parsed, entry.map, "{}", entry.name);
            assert_eq!(parsed.source(), entry.source);
        }
    }

    #[test]
    fn t1_and_verdict_lookup() {
        let t1 = lookup("T1").unwrap();
        assert_eq!(t1.metric, SMetricSpec::usual_1d());
        assert_eq!(t1.circles[1].circle.center(), &s(4.5));
        let t4 = lookup("T4").unwrap();
        assert!(t4.expected.contains(&expect(ConditionId::Thm1S2, 0, true)));
        assert!(t4.expected.contains(&expect(ConditionId::Thm1S1, 0, false)));
        let t8 = lookup("T8").unwrap();
        assert!(t8.expected.iter().any(|v| v.condition == ConditionId::Thm2S2 && v.holds));
        assert!(t8.expected.iter().any(|v| v.condition == ConditionId::Thm2S1 && !v.holds));
    }

    #[test]
    fn intro_map_is_inversion_in_unit_circle() {
        use num_complex::Complex64;
        let intro = lookup("intro").unwrap();
        for (a, b) in [(0.6, 0.8), (2.0, 0.0), (-0.3, 1.7), (0.01, -0.02)] {
            let want = Complex64::new(a, b).conj().inv();
            let img = intro.map.apply(&Point::xy(a, b)).unwrap();
            assert!(img.max_abs_diff(&Point::xy(want.re, want.im)) < 1e-12, "{a} {b}");
        }
        let img = intro.map.apply(&Point::xy(0.6, 0.8)).unwrap();
        assert!(img.max_abs_diff(&Point::xy(0.6, 0.8)) < 1e-15);
        assert!(intro.map.apply(&Point::xy(0.0, 0.0)).is_err());
    }
}

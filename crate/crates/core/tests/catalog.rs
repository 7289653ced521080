use fixcircle_core::geometry::TraceOptions;
use fixcircle_core::mappings::{catalog, fixed_point_set};
use fixcircle_core::theorems::{check_thm1, check_thm2, check_thm6, CheckOptions, CircleSample, ConditionId};
use fixcircle_core::{Circle, Point, Window};

fn sample_for(circle: &Circle) -> CircleSample {
    if circle.metric().dimension() == 1 {
        return CircleSample::analytic(circle).unwrap();
    }
    let r = circle.radius();
    let window = Window::new(vec![-2.0 * r - 1.0; 2], vec![r + 1.0; 2]).unwrap();
    CircleSample::traced(circle, &window, &TraceOptions { resolution: 400, band_tol: 1e-8 }).unwrap()
}

#[test]
fn stated_verdicts_are_reproduced() {
    let opts = CheckOptions::default();
    for entry in catalog() {
        for exp in &entry.expected {
            let circle = &entry.circles[exp.circle].circle;
            let report = match exp.condition {
                ConditionId::Thm1S1 | ConditionId::Thm1S2 => {
                    let out = check_thm1(&entry.map, circle, &sample_for(circle), &opts).unwrap();
                    if exp.condition == ConditionId::Thm1S1 {
                        out.first
                    } else {
                        out.second
                    }
                }
                ConditionId::Thm2S1 | ConditionId::Thm2S2 => {
                    let h = exp.h.unwrap_or(0.0);
                    let out = check_thm2(&entry.map, circle, &sample_for(circle), h, &opts).unwrap();
                    if exp.condition == ConditionId::Thm2S1 {
                        out.first
                    } else {
                        out.second
                    }
                }
                ConditionId::Eqn1 | ConditionId::Eqn2 => {
                    let domain = Window::interval(-6.0, 6.0).unwrap().grid_step(0.25).unwrap();
                    let out = check_thm6(&entry.map, &entry.metric, circle.center(), &domain, &opts).unwrap();
                    if exp.condition == ConditionId::Eqn1 {
                        out.eqn1
                    } else {
                        out.eqn2
                    }
                }
                other => panic!("{}: no stated verdict for {other}", entry.name),
            };
            assert_eq!(
                report.verdict.holds(),
                exp.holds,
                "{} {} on circle {}: {}",
                entry.name,
                exp.condition,
                exp.circle,
                report.verdict
            );
        }
    }
}

#[test]
fn documented_circle_points_and_fixedness() {
    for entry in catalog() {
        for doc in &entry.circles {
            if let Some(points) = &doc.points {
                assert_eq!(&sample_for(&doc.circle).points, points, "{}", entry.name);
            }
            let sample = sample_for(&doc.circle);
            // Traced points are only within the trace band of the circle, and
            // a map can move them by a small multiple of that.
            let tol = if sample.exhaustive { 1e-9 } else { 1e-7 };
            let pts = sample.points;
            let fixed = fixed_point_set(&entry.map, &entry.metric, &pts, tol);
            assert_eq!(fixed.len() == pts.len() && !pts.is_empty(), doc.fixed, "{}", entry.name);
        }
    }
}

#[test]
fn t10_fixed_set_on_a_grid() {
    let t10 = catalog().into_iter().find(|e| e.name == "T10").unwrap();
    let grid = Window::interval(-4.0, 12.0).unwrap().grid_step(0.5).unwrap();
    let fixed = fixed_point_set(&t10.map, &t10.metric, &grid, 1e-9);
    // The three circles plus the default image 5, which is itself fixed.
    let expected: Vec<Point> = [-1.0, 0.0, 1.0, 2.0, 5.0, 10.0].map(Point::scalar).to_vec();
    assert_eq!(fixed, expected);
}

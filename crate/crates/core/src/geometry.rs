//! Circles, closed balls, diameters and orbit sets.
//!
//! A circle `C(x0, r)` is the level set `{x : S(x, x, x0) = r}`. On ℝ, for
//! families whose self-distance is `2|x − x0|`, it is the two-point set
//! `{x0 − r/2, x0 + r/2}`; elsewhere it is traced on a grid.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mappings::PiecewiseMap;
use crate::metric::SMetricSpec;
use crate::point::Point;
use crate::sampling::Window;

#[derive(Debug, Clone, PartialEq)]
pub struct Circle {
    center: Point,
    radius: f64,
    metric: SMetricSpec,
}

/// Result of testing a point against a circle or ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// `S(x, x, x0) − r`: negative inside, positive outside.
    pub residual: f64,
}

fn check_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidRadius(radius))
    }
}

impl Circle {
    pub fn new(center: Point, radius: f64, metric: SMetricSpec) -> Result<Self> {
        check_radius(radius)?;
        center.ensure_dim(metric.dimension())?;
        Ok(Circle { center, radius, metric })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn metric(&self) -> &SMetricSpec {
        &self.metric
    }

    /// `φ(x) = S(x, x, x0)`.
    pub fn phi(&self, x: &Point) -> Result<f64> {
        self.metric.self_distance(x, &self.center)
    }

    pub fn membership(&self, x: &Point, tol: f64) -> Result<Membership> {
        let residual = self.phi(x)? - self.radius;
        Ok(Membership { member: residual.abs() <= tol, residual })
    }

    pub fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        Ok(self.membership(x, tol)?.member)
    }

    pub fn ball(&self) -> ClosedBall {
        ClosedBall { center: self.center.clone(), radius: self.radius, metric: self.metric.clone() }
    }
}

/// `B[x0, r] = {x : S(x, x, x0) ≤ r}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedBall {
    center: Point,
    radius: f64,
    metric: SMetricSpec,
}

impl ClosedBall {
    pub fn new(center: Point, radius: f64, metric: SMetricSpec) -> Result<Self> {
        check_radius(radius)?;
        center.ensure_dim(metric.dimension())?;
        Ok(ClosedBall { center, radius, metric })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn metric(&self) -> &SMetricSpec {
        &self.metric
    }

    pub fn membership(&self, x: &Point, tol: f64) -> Result<Membership> {
        let residual = self.metric.self_distance(x, &self.center)? - self.radius;
        Ok(Membership { member: residual <= tol, residual })
    }

    pub fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        Ok(self.membership(x, tol)?.member)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Circle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Circle", 3)?;
        st.serialize_field("center", &self.center)?;
        st.serialize_field("radius", &self.radius)?;
        st.serialize_field("metric", &self.metric.name())?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize), serde(rename_all = "snake_case"))]
pub enum SolutionKind {
    FinitePointSet,
    TracedPointCloud,
    Empty,
}

/// Concrete points of a circle, sorted lexicographically, with residuals
/// `S(p, p, x0) − r`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CircleSolution {
    pub kind: SolutionKind,
    pub points: Vec<Point>,
    pub residuals: Vec<f64>,
}

impl CircleSolution {
    pub fn empty() -> Self {
        CircleSolution { kind: SolutionKind::Empty, points: Vec::new(), residuals: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    fn from_pairs(kind: SolutionKind, mut pairs: Vec<(Point, f64)>) -> Self {
        if pairs.is_empty() {
            return Self::empty();
        }
        pairs.sort_by(|a, b| a.0.cmp_lex(&b.0));
        let (points, residuals) = pairs.into_iter().unzip();
        CircleSolution { kind, points, residuals }
    }
}

/// Exact solution of `S(x, x, x0) = r` on ℝ for families with
/// `S(x, x, x0) = 2|x − x0|`.
pub fn solve_circle_1d(spec: &SMetricSpec, x0: &Point, r: f64) -> Result<CircleSolution> {
    check_radius(r)?;
    x0.ensure_dim(spec.dimension())?;
    if !spec.has_linear_self_distance() {
        return Err(Error::UnsupportedFamily { family: spec.name(), operation: "exact 1D circle solving" });
    }
    let c = x0.coords()[0];
    let pairs = [c - r / 2.0, c + r / 2.0]
        .into_iter()
        .map(|x| {
            let p = Point::scalar(x);
            let res = spec.self_distance(&p, x0)? - r;
            Ok((p, res))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CircleSolution::from_pairs(SolutionKind::FinitePointSet, pairs))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Grid cells per axis.
    pub resolution: usize,
    /// Every emitted point satisfies `|S(p, p, x0) − r| ≤ band_tol`.
    pub band_tol: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { resolution: 512, band_tol: 1e-8 }
    }
}

impl TraceOptions {
    fn validate(&self) -> Result<()> {
        if self.resolution < 8 {
            return Err(Error::InvalidParameter(format!("resolution must be at least 8, got {}", self.resolution)));
        }
        if !self.band_tol.is_finite() || self.band_tol <= 0.0 {
            return Err(Error::InvalidParameter(format!("band_tol must be positive, got {}", self.band_tol)));
        }
        Ok(())
    }
}

/// Refines a sign change of `f` on `[0, 1]` (edge parameter) starting from
/// the linear interpolant, then bisecting. Returns `None` when the bracket
/// collapses without reaching the band (a jump rather than a root).
fn refine_edge<F>(f: &mut F, fa: f64, fb: f64, band_tol: f64) -> Result<Option<(f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b, mut fa) = (0.0f64, 1.0f64, fa);
    let mut t = fa / (fa - fb);
    for _ in 0..200 {
        let ft = f(t)?;
        if ft.abs() <= band_tol {
            return Ok(Some((t, ft)));
        }
        if (ft < 0.0) == (fa < 0.0) {
            a = t;
            fa = ft;
        } else {
            b = t;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return Ok(None);
        }
        t = mid;
    }
    Ok(None)
}

/// Traces `f(x) = S(x, x, x0) − r` on a `resolution × resolution` grid over
/// `window`. Grid nodes inside the band are emitted directly; every grid
/// edge whose endpoints have strictly opposite signs contributes one point,
/// found by linear interpolation and refined by bisection.
pub fn trace_circle_2d(
    spec: &SMetricSpec,
    x0: &Point,
    r: f64,
    window: &Window,
    opts: &TraceOptions,
) -> Result<CircleSolution> {
    check_radius(r)?;
    opts.validate()?;
    window.validate()?;
    if spec.dimension() != 2 || window.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: spec.dimension().max(window.dim()) });
    }
    x0.ensure_dim(2)?;
    let n = opts.resolution;
    let node = |i: usize, j: usize| Point::xy(window.node(0, i, n), window.node(1, j, n));
    let f = |p: &Point| -> Result<f64> { Ok(spec.self_distance(p, x0)? - r) };

    let mut values = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        for j in 0..=n {
            values.push(f(&node(i, j))?);
        }
    }
    let at = |i: usize, j: usize| values[i * (n + 1) + j];
    let inside = |v: f64| v.abs() <= opts.band_tol;

    let mut pairs = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let v = at(i, j);
            if inside(v) {
                pairs.push((node(i, j), v));
            }
            for (di, dj) in [(1usize, 0usize), (0, 1)] {
                let (k, l) = (i + di, j + dj);
                if k > n || l > n {
                    continue;
                }
                let w = at(k, l);
                if inside(w) || inside(v) || (v < 0.0) == (w < 0.0) {
                    continue;
                }
                let (a, b) = (node(i, j), node(k, l));
                let lerp = |t: f64| {
                    let (ac, bc) = (a.coords(), b.coords());
                    Point::xy(ac[0] + (bc[0] - ac[0]) * t, ac[1] + (bc[1] - ac[1]) * t)
                };
                let mut along = |t: f64| f(&lerp(t));
                if let Some((t, ft)) = refine_edge(&mut along, v, w, opts.band_tol)? {
                    pairs.push((lerp(t), ft));
                }
            }
        }
    }
    Ok(CircleSolution::from_pairs(SolutionKind::TracedPointCloud, pairs))
}

/// One-dimensional counterpart of [`trace_circle_2d`] on `[lo, hi]`.
pub fn trace_circle_1d(
    spec: &SMetricSpec,
    x0: &Point,
    r: f64,
    window: &Window,
    opts: &TraceOptions,
) -> Result<CircleSolution> {
    check_radius(r)?;
    opts.validate()?;
    window.validate()?;
    if spec.dimension() != 1 || window.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: spec.dimension().max(window.dim()) });
    }
    x0.ensure_dim(1)?;
    let n = opts.resolution;
    let f = |x: f64| -> Result<f64> { Ok(spec.self_distance(&Point::scalar(x), x0)? - r) };
    let xs: Vec<f64> = (0..=n).map(|i| window.node(0, i, n)).collect();
    let values = xs.iter().map(|x| f(*x)).collect::<Result<Vec<_>>>()?;
    let inside = |v: f64| v.abs() <= opts.band_tol;
    let mut pairs = Vec::new();
    for i in 0..=n {
        if inside(values[i]) {
            pairs.push((Point::scalar(xs[i]), values[i]));
        }
        if i == n {
            continue;
        }
        let (v, w) = (values[i], values[i + 1]);
        if inside(v) || inside(w) || (v < 0.0) == (w < 0.0) {
            continue;
        }
        let (a, b) = (xs[i], xs[i + 1]);
        let mut along = |t: f64| f(a + (b - a) * t);
        if let Some((t, ft)) = refine_edge(&mut along, v, w, opts.band_tol)? {
            pairs.push((Point::scalar(a + (b - a) * t), ft));
        }
    }
    Ok(CircleSolution::from_pairs(SolutionKind::TracedPointCloud, pairs))
}

/// `sup {S(x, x, y) : x, y ∈ pts}` over a finite set. Both orders of each
/// pair are evaluated, so the result does not depend on the order of `pts`
/// even when rounding (or a user metric) breaks the symmetry of `S(x, x, y)`.
pub fn diameter(spec: &SMetricSpec, pts: &[Point]) -> Result<f64> {
    if pts.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut d = 0.0f64;
    for (i, x) in pts.iter().enumerate() {
        for (j, y) in pts.iter().enumerate() {
            if i != j {
                d = d.max(spec.self_distance(x, y)?);
            }
        }
    }
    Ok(d)
}

/// `U_x = {Tⁿx : n = 1, 2, …}` truncated to at most `n_max` iterates.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OrbitSet {
    pub seed: Point,
    pub iterates: Vec<Point>,
    /// `n_max` reached without closing a cycle.
    pub truncated: bool,
    /// A coordinate exceeded the escape bound.
    pub unbounded: bool,
    /// `None` when unbounded.
    pub diameter: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitOptions {
    pub n_max: usize,
    pub escape_bound: f64,
    pub cycle_tol: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions { n_max: 64, escape_bound: 1e9, cycle_tol: 1e-9 }
    }
}

/// Iterates `map` from `seed`, stopping on a repeated point, on escape past
/// `escape_bound`, or after `n_max` steps.
pub fn orbit(map: &PiecewiseMap, metric: &SMetricSpec, seed: &Point, opts: &OrbitOptions) -> Result<OrbitSet> {
    if opts.n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let mut iterates: Vec<Point> = Vec::new();
    let mut current = seed.clone();
    let (mut truncated, mut unbounded) = (true, false);
    for _ in 0..opts.n_max {
        let next = map.apply(&current)?;
        if next.max_abs_coord() > opts.escape_bound {
            iterates.push(next);
            unbounded = true;
            truncated = false;
            break;
        }
        if iterates.iter().any(|p| p.max_abs_diff(&next) <= opts.cycle_tol) {
            truncated = false;
            break;
        }
        iterates.push(next.clone());
        current = next;
    }
    let diameter = if unbounded { None } else { Some(diameter(metric, &iterates)?) };
    Ok(OrbitSet { seed: seed.clone(), iterates, truncated, unbounded, diameter })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::parse_map;
    use crate::metric::BaseMetric;
    use alloc::vec;

    fn pts(xs: &[f64]) -> Vec<Point> {
        xs.iter().map(|x| Point::scalar(*x)).collect()
    }

    #[test]
    fn usual_circles() {
        let s = SMetricSpec::usual_1d();
        let sol = solve_circle_1d(&s, &Point::scalar(0.0), 2.0).unwrap();
        assert_eq!(sol.kind, SolutionKind::FinitePointSet);
        assert_eq!(sol.points, pts(&[-1.0, 1.0]));
        assert_eq!(sol.residuals, vec![0.0, 0.0]);
        let sol = solve_circle_1d(&s, &Point::scalar(4.5), 11.0).unwrap();
        assert_eq!(sol.points, pts(&[-1.0, 10.0]));
        let sol = solve_circle_1d(&s, &Point::scalar(1.0), 2.0).unwrap();
        assert_eq!(sol.points, pts(&[0.0, 2.0]));
    }

    #[test]
    fn sym_skew_circle() {
        let sol = solve_circle_1d(&SMetricSpec::sym_skew_1d(), &Point::scalar(0.0), 3.0).unwrap();
        assert_eq!(sol.points, pts(&[-1.5, 1.5]));
    }

    #[test]
    fn unsupported_and_invalid() {
        let err = solve_circle_1d(&SMetricSpec::generated(BaseMetric::Discrete, 1), &Point::scalar(0.0), 1.0);
        assert!(matches!(err, Err(Error::UnsupportedFamily { .. })));
        assert!(matches!(
            solve_circle_1d(&SMetricSpec::usual_1d(), &Point::scalar(0.0), 0.0),
            Err(Error::InvalidRadius(_))
        ));
        assert!(Circle::new(Point::scalar(0.0), -1.0, SMetricSpec::usual_1d()).is_err());
    }

    #[test]
    fn membership_residual_sign() {
        let c = Circle::new(Point::scalar(0.0), 2.0, SMetricSpec::usual_1d()).unwrap();
        assert_eq!(c.membership(&Point::scalar(-1.0), 1e-9).unwrap(), Membership { member: true, residual: 0.0 });
        let m = c.membership(&Point::scalar(0.0), 1e-9).unwrap();
        assert!(!m.member);
        assert_eq!(m.residual, -2.0);
        assert!(c.membership(&Point::scalar(3.0), 1e-9).unwrap().residual > 0.0);

        let e = Circle::new(Point::xy(0.0, 0.0), 2.0, SMetricSpec::exp_2d()).unwrap();
        assert!(e.contains(&Point::xy(core::f64::consts::LN_2, 0.0), 1e-12).unwrap());
    }

    #[test]
    fn ball_membership() {
        let b = ClosedBall::new(Point::scalar(0.0), 4.0, SMetricSpec::usual_1d()).unwrap();
        assert!(b.contains(&Point::scalar(2.0), 0.0).unwrap());
        assert!(b.contains(&Point::scalar(-1.0), 0.0).unwrap());
        assert!(!b.contains(&Point::scalar(2.25), 0.0).unwrap());
    }

    #[test]
    fn diamond_trace() {
        let s = SMetricSpec::sym_skew_2d();
        let w = Window::square(-1.0, 1.0).unwrap();
        let opts = TraceOptions { resolution: 256, band_tol: 1e-8 };
        let sol = trace_circle_2d(&s, &Point::xy(0.0, 0.0), 1.0, &w, &opts).unwrap();
        assert_eq!(sol.kind, SolutionKind::TracedPointCloud);
        assert!(!sol.is_empty());
        assert!(sol.max_residual() <= 1e-8);
        for p in &sol.points {
            let c = p.coords();
            assert!((2.0 * (c[0].abs() + c[1].abs()) - 1.0).abs() <= 1e-8);
        }
        let mut sorted = sol.points.clone();
        sorted.sort_by(|a, b| a.cmp_lex(b));
        assert_eq!(sorted, sol.points);
    }

    #[test]
    fn exp_trace_hits_ln2() {
        let s = SMetricSpec::exp_2d();
        let w = Window::square(-4.0, 1.0).unwrap();
        let opts = TraceOptions { resolution: 640, band_tol: 1e-8 };
        let sol = trace_circle_2d(&s, &Point::xy(0.0, 0.0), 2.0, &w, &opts).unwrap();
        let target = Point::xy(core::f64::consts::LN_2, 0.0);
        let best = sol.points.iter().map(|p| p.max_abs_diff(&target)).fold(f64::INFINITY, f64::min);
        assert!(best <= 1e-6, "closest {best}");
        assert!(sol.max_residual() <= 1e-8);
    }

    #[test]
    fn trace_away_from_circle_is_empty() {
        let w = Window::square(5.0, 6.0).unwrap();
        let sol = trace_circle_2d(&SMetricSpec::sym_skew_2d(), &Point::xy(0.0, 0.0), 1.0, &w, &TraceOptions::default())
            .unwrap();
        assert_eq!(sol.kind, SolutionKind::Empty);
        assert!(trace_circle_2d(
            &SMetricSpec::sym_skew_2d(),
            &Point::xy(0.0, 0.0),
            1.0,
            &w,
            &TraceOptions { resolution: 4, band_tol: 1e-8 }
        )
        .is_err());
    }

    #[test]
    fn analytic_and_traced_1d_agree() {
        let w = Window::interval(-7.0, 7.0).unwrap();
        let opts = TraceOptions { resolution: 1000, band_tol: 1e-12 };
        for spec in [SMetricSpec::usual_1d(), SMetricSpec::sym_skew_1d()] {
            for (c, r) in [(0.0, 2.0), (0.3, 5.1), (-2.0, 3.3)] {
                let exact = solve_circle_1d(&spec, &Point::scalar(c), r).unwrap();
                let traced = trace_circle_1d(&spec, &Point::scalar(c), r, &w, &opts).unwrap();
                assert_eq!(exact.points.len(), traced.points.len());
                for (a, b) in exact.points.iter().zip(&traced.points) {
                    assert!(a.max_abs_diff(b) <= 14.0 / 1000.0);
                }
                assert!(exact.max_residual() <= 1e-12);
            }
        }
    }

    #[test]
    fn diameters() {
        let s = SMetricSpec::usual_1d();
        assert_eq!(diameter(&s, &pts(&[0.0, 1.0, 3.0])).unwrap(), 6.0);
        assert_eq!(diameter(&s, &pts(&[3.0, 0.0, 1.0])).unwrap(), 6.0);
        assert_eq!(diameter(&s, &pts(&[2.5])).unwrap(), 0.0);
        assert_eq!(diameter(&s, &pts(&[-1.0, 10.0])).unwrap(), 22.0);
        assert!(diameter(&s, &[]).is_err());
    }

    #[test]
    fn orbits() {
        let s = SMetricSpec::usual_1d();
        let t1 = parse_map("x in {-1,1} -> x ; otherwise -> 10", 1, None).unwrap();
        let o = orbit(&t1, &s, &Point::scalar(5.0), &OrbitOptions::default()).unwrap();
        assert_eq!(o.iterates, pts(&[10.0]));
        assert_eq!(o.diameter, Some(0.0));
        assert!(!o.truncated && !o.unbounded);

        let o = orbit(&t1, &s, &Point::scalar(1.0), &OrbitOptions::default()).unwrap();
        assert_eq!(o.iterates, pts(&[1.0]));

        let shift = parse_map("otherwise -> x + 2", 1, None).unwrap();
        let o = orbit(&shift, &s, &Point::scalar(3.0), &OrbitOptions { escape_bound: 100.0, ..Default::default() })
            .unwrap();
        assert!(o.unbounded);
        assert_eq!(o.diameter, None);
        let o = orbit(&shift, &s, &Point::scalar(3.0), &OrbitOptions::default()).unwrap();
        assert!(o.truncated);
        assert_eq!(o.iterates.len(), 64);
    }
}

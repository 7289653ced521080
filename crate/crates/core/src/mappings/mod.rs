//! Piecewise self-maps of ℝⁿ: guards, rule evaluation, the multi-circle
//! constructor and a brute-force fixed-point filter.

mod catalog;
mod dsl;

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::{Circle, ClosedBall};
use crate::metric::SMetricSpec;
use crate::point::Point;

pub use catalog::{catalog, exm2_map, lookup, DocumentedCircle, ExpectedVerdict, MapCatalogEntry, CATALOG_NAMES};
pub use dsl::{parse_map, MapDisplay};

/// Tolerance used by exact-equality and finite-set guards.
pub const GUARD_TOL: f64 = 1e-9;
/// Tolerance used by circle and ball guards; wide enough to accept traced
/// circle points, whose residuals are bounded by the tracing band.
pub const GUARD_CIRCLE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub enum Guard {
    InFiniteSet {
        points: Vec<Point>,
        tol: f64,
    },
    OnCircle {
        circle: Circle,
        tol: f64,
    },
    InClosedBall {
        ball: ClosedBall,
        tol: f64,
    },
    /// `|x| ≥ threshold` on ℝ.
    AbsAtLeast(f64),
    /// `|x| < threshold` on ℝ.
    AbsLessThan(f64),
    CoordEquals {
        index: usize,
        value: f64,
        tol: f64,
    },
    Otherwise,
}

impl Guard {
    pub fn matches(&self, x: &Point) -> Result<bool> {
        Ok(match self {
            Guard::InFiniteSet { points, tol } => points.iter().any(|p| p.max_abs_diff(x) <= *tol),
            Guard::OnCircle { circle, tol } => circle.contains(x, *tol)?,
            Guard::InClosedBall { ball, tol } => ball.contains(x, *tol)?,
            Guard::AbsAtLeast(t) => libm::fabs(x.coords()[0]) >= *t,
            Guard::AbsLessThan(t) => libm::fabs(x.coords()[0]) < *t,
            Guard::CoordEquals { index, value, tol } => libm::fabs(x.coords()[*index] - value) <= *tol,
            Guard::Otherwise => true,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub guard: Guard,
    /// One expression per output coordinate.
    pub exprs: Vec<Expr>,
}

/// Ordered rules, first match wins; the last rule is `otherwise`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseMap {
    name: String,
    dimension: usize,
    rules: Vec<Rule>,
}

impl PiecewiseMap {
    pub fn new(name: impl Into<String>, dimension: usize, rules: Vec<Rule>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("map dimension must be positive".into()));
        }
        match rules.last() {
            Some(Rule { guard: Guard::Otherwise, .. }) => {}
            _ => return Err(Error::InvalidParameter("the last rule must be `otherwise`".into())),
        }
        for rule in &rules {
            if rule.exprs.len() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: rule.exprs.len() });
            }
            if let Some(e) = rule.exprs.iter().find(|e| e.arity(0) > dimension || e.arity(1) + e.arity(2) > 0) {
                return Err(Error::DimensionMismatch { expected: dimension, found: e.arity(0) });
            }
        }
        Ok(PiecewiseMap { name: name.into(), dimension, rules })
    }

    pub fn identity(dimension: usize) -> Self {
        let exprs = (0..dimension).map(Expr::var).collect();
        Self::new("identity", dimension, alloc::vec![Rule { guard: Guard::Otherwise, exprs }])
            .expect("identity is well formed")
    }

    pub fn constant(value: &Point) -> Self {
        let exprs = value.coords().iter().map(|v| Expr::Num(*v)).collect();
        Self::new("constant", value.dim(), alloc::vec![Rule { guard: Guard::Otherwise, exprs }])
            .expect("constant is well formed")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Index of the first rule whose guard matches `x`.
    pub fn rule_for(&self, x: &Point) -> Result<usize> {
        x.ensure_dim(self.dimension)?;
        for (i, rule) in self.rules.iter().enumerate() {
            if rule.guard.matches(x)? {
                return Ok(i);
            }
        }
        unreachable!("last rule is `otherwise`")
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        let i = self.rule_for(x)?;
        let coords = self.rules[i]
            .exprs
            .iter()
            .map(|e| e.eval(&[x.coords()]).map_err(|source| Error::MapEval { rule: i, source }))
            .collect::<Result<Vec<f64>>>()?;
        Point::new(coords)
    }

    /// DSL text that parses back to this map.
    pub fn source(&self) -> String {
        self.display().to_string()
    }
}

/// A map fixing every point of each circle and sending all other points to
/// `alpha`, which must lie on none of the circles.
pub fn make_multi_circle_map(circles: &[Circle], alpha: &Point) -> Result<PiecewiseMap> {
    let first = circles.first().ok_or(Error::EmptySample)?;
    if circles.iter().any(|c| c.metric() != first.metric()) {
        return Err(Error::MixedMetrics);
    }
    let dim = first.metric().dimension();
    alpha.ensure_dim(dim)?;
    for (i, c) in circles.iter().enumerate() {
        if c.contains(alpha, GUARD_CIRCLE_TOL)? {
            return Err(Error::AlphaOnCircle { circle: i });
        }
    }
    let identity: Vec<Expr> = (0..dim).map(Expr::var).collect();
    let mut rules: Vec<Rule> = circles
        .iter()
        .map(|c| Rule { guard: Guard::OnCircle { circle: c.clone(), tol: GUARD_CIRCLE_TOL }, exprs: identity.clone() })
        .collect();
    rules.push(Rule { guard: Guard::Otherwise, exprs: alpha.coords().iter().map(|v| Expr::Num(*v)).collect() });
    PiecewiseMap::new("multi_circle", dim, rules)
}

/// Points of `sample` with `S(x, x, Tx) ≤ tol`. Points where the map fails to
/// evaluate are not fixed.
pub fn fixed_point_set(map: &PiecewiseMap, metric: &SMetricSpec, sample: &[Point], tol: f64) -> Vec<Point> {
    sample
        .iter()
        .filter(|p| map.apply(p).and_then(|tp| metric.self_distance(p, &tp)).is_ok_and(|d| d <= tol))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Window;
    use alloc::vec;

    fn s(x: f64) -> Point {
        Point::scalar(x)
    }

    #[test]
    fn t1_values() {
        let t1 = parse_map("x in {-1,1} -> x ; otherwise -> 10", 1, None).unwrap();
        assert_eq!(t1.apply(&s(0.5)).unwrap(), s(10.0));
        assert_eq!(t1.apply(&s(-1.0)).unwrap(), s(-1.0));
        assert!(t1.apply(&Point::xy(0.0, 0.0)).is_err());
    }

    #[test]
    fn t5_at_zero() {
        let t5 = parse_map("x = 0 -> exp(x) - 1 ; x = 2 -> 2*x - 2 ; otherwise -> 3", 1, None).unwrap();
        assert_eq!(t5.apply(&s(0.0)).unwrap(), s(0.0));
        assert_eq!(t5.apply(&s(2.0)).unwrap(), s(2.0));
        assert_eq!(t5.apply(&s(1.0)).unwrap(), s(3.0));
    }

    #[test]
    fn domain_error_names_rule() {
        let m = parse_map("x = 1 -> x ; otherwise -> ln(x)", 1, None).unwrap();
        assert!(matches!(m.apply(&s(-1.0)), Err(Error::MapEval { rule: 1, .. })));
    }

    #[test]
    fn multi_circle_map() {
        let m = SMetricSpec::sym_skew_1d();
        let c2 = Circle::new(s(0.0), 2.0, m.clone()).unwrap();
        let c4 = Circle::new(s(0.0), 4.0, m.clone()).unwrap();
        let t9 = make_multi_circle_map(&[c2.clone(), c4.clone()], &s(5.0)).unwrap();
        for x in [-2.0, -1.0, 1.0, 2.0] {
            assert_eq!(t9.apply(&s(x)).unwrap(), s(x));
        }
        for x in [0.0, 0.5, 3.0, -7.0] {
            assert_eq!(t9.apply(&s(x)).unwrap(), s(5.0));
        }
        assert_eq!(make_multi_circle_map(core::slice::from_ref(&c2), &s(1.0)), Err(Error::AlphaOnCircle { circle: 0 }));
        let other = Circle::new(s(0.0), 2.0, SMetricSpec::usual_1d()).unwrap();
        assert_eq!(make_multi_circle_map(&[c2, other], &s(9.0)), Err(Error::MixedMetrics));
        assert!(make_multi_circle_map(&[], &s(9.0)).is_err());
    }

    #[test]
    fn multi_circle_single_diamond() {
        let c = Circle::new(Point::xy(0.0, 0.0), 1.0, SMetricSpec::sym_skew_2d()).unwrap();
        let t2 = make_multi_circle_map(&[c], &Point::xy(1.0, 0.0)).unwrap();
        assert_eq!(t2.apply(&Point::xy(0.25, 0.25)).unwrap(), Point::xy(0.25, 0.25));
        assert_eq!(t2.apply(&Point::xy(0.0, 0.0)).unwrap(), Point::xy(1.0, 0.0));
    }

    #[test]
    fn fixed_points_of_catalog_maps() {
        let usual = SMetricSpec::usual_1d();
        let t1 = parse_map("x in {-1,1} -> x ; otherwise -> 10", 1, None).unwrap();
        let grid = Window::interval(-3.0, 3.0).unwrap().grid_step(0.25).unwrap();
        assert_eq!(fixed_point_set(&t1, &usual, &grid, 1e-9), vec![s(-1.0), s(1.0)]);

        let id = PiecewiseMap::identity(1);
        assert_eq!(fixed_point_set(&id, &usual, &grid, 1e-9), grid);

        let exm1 = parse_map("abs(x) >= 3 -> x + 2 ; otherwise -> x", 1, None).unwrap();
        let grid = Window::interval(-5.0, 5.0).unwrap().grid_step(0.25).unwrap();
        let want: Vec<Point> = grid.iter().filter(|p| p.coords()[0].abs() < 3.0).cloned().collect();
        assert_eq!(fixed_point_set(&exm1, &usual, &grid, 1e-9), want);
    }

    #[test]
    fn constructor_validation() {
        let rules = vec![Rule { guard: Guard::AbsAtLeast(1.0), exprs: vec![Expr::var(0)] }];
        assert!(PiecewiseMap::new("bad", 1, rules).is_err());
        let rules = vec![Rule { guard: Guard::Otherwise, exprs: vec![Expr::var(1)] }];
        assert!(PiecewiseMap::new("bad", 1, rules).is_err());
    }
}

//! S-metric families.
//!
//! An S-metric on a set X is a map `S: X³ → [0, ∞)` with `S(x, y, z) = 0`
//! iff `x = y = z` and `S(x, y, z) ≤ S(x, x, a) + S(y, y, a) + S(z, z, a)`.
//! Every family here is instantiated on ℝⁿ.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};

use libm::{exp, fabs, sqrt};

use crate::error::{Error, Result};
use crate::expr::{Expr, Vars};
use crate::point::Point;

/// Ordinary metrics that generate an S-metric via `S(x, y, z) = d(x, z) + d(y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseMetric {
    Euclidean,
    /// `|x − y|` on ℝ.
    Abs,
    /// 0 on equal points, 1 otherwise.
    Discrete,
}

impl BaseMetric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            BaseMetric::Euclidean => sqrt(a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>()),
            BaseMetric::Abs => fabs(a[0] - b[0]),
            BaseMetric::Discrete => {
                if a == b {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            BaseMetric::Euclidean => "euclidean",
            BaseMetric::Abs => "abs",
            BaseMetric::Discrete => "discrete",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `|x − z| + |y − z|` on ℝ.
    Usual1D,
    /// `|x − z| + |x + z − 2y|` on ℝ.
    SymSkew1D,
    /// `Σ |xᵢ − zᵢ| + |xᵢ + zᵢ − 2yᵢ|` on ℝ².
    SymSkew2D,
    /// `Σ |e^xᵢ − e^zᵢ| + |e^xᵢ + e^zᵢ − 2e^yᵢ|` on ℝ².
    Exp2D,
    GeneratedFromMetric(BaseMetric),
    /// `(|x − z| + |y − z|) / 2` with the Euclidean norm (ℂ ≅ ℝ² by default).
    HalfSum,
    UserDsl,
}

/// A concrete S-metric: family, dimension and parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SMetricSpec {
    family: Family,
    dimension: usize,
    params: BTreeMap<String, f64>,
    dsl: Option<(String, Expr)>,
}

/// Names accepted by [`SMetricSpec::from_name`].
pub const FAMILY_NAMES: &[&str] = &[
    "usual1d",
    "symskew1d",
    "symskew2d",
    "exp2d",
    "halfsum",
    "generated:euclidean",
    "generated:abs",
    "generated:discrete",
    "dsl",
];

impl SMetricSpec {
    fn fixed(family: Family, dimension: usize) -> Self {
        SMetricSpec { family, dimension, params: BTreeMap::new(), dsl: None }
    }

    pub fn usual_1d() -> Self {
        Self::fixed(Family::Usual1D, 1)
    }

    pub fn sym_skew_1d() -> Self {
        Self::fixed(Family::SymSkew1D, 1)
    }

    pub fn sym_skew_2d() -> Self {
        Self::fixed(Family::SymSkew2D, 2)
    }

    pub fn exp_2d() -> Self {
        Self::fixed(Family::Exp2D, 2)
    }

    pub fn half_sum(dim: usize) -> Self {
        Self::with_dim_param(Family::HalfSum, dim)
    }

    /// S-metric generated by `metric`; `Abs` is always one-dimensional.
    pub fn generated(metric: BaseMetric, dim: usize) -> Self {
        match metric {
            BaseMetric::Abs => Self::fixed(Family::GeneratedFromMetric(metric), 1),
            _ => Self::with_dim_param(Family::GeneratedFromMetric(metric), dim),
        }
    }

    fn with_dim_param(family: Family, dim: usize) -> Self {
        let mut s = Self::fixed(family, dim.max(1));
        s.params.insert("dim".into(), dim.max(1) as f64);
        s
    }

    /// User-defined metric. The source is an expression over `x`, `y`, `z`
    /// (coordinates `x1..xn` etc.), optionally prefixed with `S(x,y,z) =`.
    pub fn dsl(source: &str, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let body = strip_metric_prefix(source);
        let expr = Expr::parse(body, Vars::metric(dim))?;
        let mut s = Self::with_dim_param(Family::UserDsl, dim);
        s.dsl = Some((source.to_string(), expr));
        Ok(s)
    }

    /// Resolves a family by its scenario-file name. The only parameter key is
    /// `dim`, accepted by the dimension-generic families.
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>, dsl: Option<&str>) -> Result<Self> {
        let dim = match params.get("dim") {
            None => None,
            Some(d) if *d >= 1.0 && libm::trunc(*d) == *d && *d <= 64.0 => Some(*d as usize),
            Some(d) => return Err(Error::InvalidParameter(format!("dim = {d}"))),
        };
        let takes_dim = matches!(name, "halfsum" | "generated:euclidean" | "generated:discrete" | "dsl");
        if let Some(key) = params.keys().find(|k| !(takes_dim && k.as_str() == "dim")) {
            return Err(Error::InvalidParameter(format!("`{key}` is not a parameter of `{name}`")));
        }
        if name != "dsl" && dsl.is_some() {
            return Err(Error::InvalidParameter(format!("`{name}` does not take a DSL source")));
        }
        Ok(match name {
            "usual1d" => Self::usual_1d(),
            "symskew1d" => Self::sym_skew_1d(),
            "symskew2d" => Self::sym_skew_2d(),
            "exp2d" => Self::exp_2d(),
            "halfsum" => Self::half_sum(dim.unwrap_or(2)),
            "generated:euclidean" => Self::generated(BaseMetric::Euclidean, dim.unwrap_or(2)),
            "generated:abs" => Self::generated(BaseMetric::Abs, 1),
            "generated:discrete" => Self::generated(BaseMetric::Discrete, dim.unwrap_or(1)),
            "dsl" => {
                let src = dsl.ok_or_else(|| Error::InvalidParameter("family `dsl` needs a source".into()))?;
                Self::dsl(src, dim.unwrap_or(1))?
            }
            other => return Err(Error::UnknownFamily(other.to_string())),
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn dsl_source(&self) -> Option<&str> {
        self.dsl.as_ref().map(|(s, _)| s.as_str())
    }

    /// Scenario-file name of the family.
    pub fn name(&self) -> String {
        match self.family {
            Family::Usual1D => "usual1d".into(),
            Family::SymSkew1D => "symskew1d".into(),
            Family::SymSkew2D => "symskew2d".into(),
            Family::Exp2D => "exp2d".into(),
            Family::HalfSum => "halfsum".into(),
            Family::GeneratedFromMetric(m) => format!("generated:{}", m.name()),
            Family::UserDsl => "dsl".into(),
        }
    }

    /// `S(x, y, z)`. The value is returned as computed; a user-defined
    /// metric may produce negative values, which the axiom checks report.
    pub fn eval(&self, x: &Point, y: &Point, z: &Point) -> Result<f64> {
        for p in [x, y, z] {
            p.ensure_dim(self.dimension)?;
        }
        let (x, y, z) = (x.coords(), y.coords(), z.coords());
        Ok(match self.family {
            Family::Usual1D => fabs(x[0] - z[0]) + fabs(y[0] - z[0]),
            Family::SymSkew1D => fabs(x[0] - z[0]) + fabs(x[0] + z[0] - 2.0 * y[0]),
            Family::SymSkew2D => (0..2).map(|i| fabs(x[i] - z[i]) + fabs(x[i] + z[i] - 2.0 * y[i])).sum(),
            Family::Exp2D => (0..2)
                .map(|i| {
                    let (ex, ey, ez) = (exp(x[i]), exp(y[i]), exp(z[i]));
                    fabs(ex - ez) + fabs(ex + ez - 2.0 * ey)
                })
                .sum(),
            Family::GeneratedFromMetric(d) => d.distance(x, z) + d.distance(y, z),
            Family::HalfSum => {
                let d = BaseMetric::Euclidean;
                (d.distance(x, z) + d.distance(y, z)) / 2.0
            }
            Family::UserDsl => {
                let (_, expr) = self.dsl.as_ref().expect("dsl family carries an expression");
                expr.eval(&[x, y, z]).map_err(Error::MetricEval)?
            }
        })
    }

    /// `S(x, x, y)`, the self-distance used for circles and balls.
    pub fn self_distance(&self, x: &Point, y: &Point) -> Result<f64> {
        self.eval(x, x, y)
    }

    /// True when `S(x, x, x0) = 2|x − x0|` on ℝ, so circles are two-point sets.
    pub fn has_linear_self_distance(&self) -> bool {
        self.dimension == 1
            && matches!(
                self.family,
                Family::Usual1D
                    | Family::SymSkew1D
                    | Family::GeneratedFromMetric(BaseMetric::Abs)
                    | Family::GeneratedFromMetric(BaseMetric::Euclidean)
            )
    }
}

fn strip_metric_prefix(src: &str) -> &str {
    let t = src.trim_start();
    if let Some(rest) = t.strip_prefix('S') {
        let rest = rest.trim_start();
        if rest.starts_with('(') {
            if let Some(eq) = rest.find('=') {
                return &rest[eq + 1..];
            }
        }
    }
    src
}

/// Every metric `d` generates the S-metric `d(x, z) + d(y, z)`.
pub fn generate_from_metric(metric: BaseMetric, dim: usize) -> SMetricSpec {
    SMetricSpec::generated(metric, dim)
}

#[cfg(feature = "serde")]
impl serde::Serialize for SMetricSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SMetricSpec", 4)?;
        st.serialize_field("family", &self.name())?;
        st.serialize_field("dimension", &self.dimension)?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("dsl", &self.dsl_source())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1(spec: &SMetricSpec, x: f64, y: f64, z: f64) -> f64 {
        spec.eval(&Point::scalar(x), &Point::scalar(y), &Point::scalar(z)).unwrap()
    }

    #[test]
    fn usual_values() {
        let s = SMetricSpec::usual_1d();
        assert_eq!(s1(&s, 1.0, 2.0, 3.0), 3.0);
        assert_eq!(s1(&s, 5.0, 5.0, 5.0), 0.0);
    }

    #[test]
    fn sym_skew_2d_self_distance() {
        let s = SMetricSpec::sym_skew_2d();
        let v = s.eval(&Point::xy(1.0, 0.0), &Point::xy(1.0, 0.0), &Point::xy(0.0, 0.0)).unwrap();
        assert_eq!(v, 2.0);
    }

    #[test]
    fn exp_2d_at_ln2() {
        let s = SMetricSpec::exp_2d();
        let v = s.self_distance(&Point::xy(core::f64::consts::LN_2, 0.0), &Point::xy(0.0, 0.0)).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn discrete_generated() {
        let s = generate_from_metric(BaseMetric::Discrete, 1);
        assert_eq!(s1(&s, 0.0, 1.0, 2.0), 2.0);
        assert_eq!(s1(&s, 2.0, 2.0, 2.0), 0.0);
    }

    #[test]
    fn euclidean_generated_self_distance_doubles() {
        let s = generate_from_metric(BaseMetric::Euclidean, 2);
        let (x, x0) = (Point::xy(3.0, 4.0), Point::xy(0.0, 0.0));
        assert_eq!(s.self_distance(&x, &x0).unwrap(), 10.0);
    }

    #[test]
    fn half_sum_is_modulus_at_origin() {
        let s = SMetricSpec::half_sum(2);
        let z = Point::xy(3.0, -4.0);
        assert_eq!(s.self_distance(&z, &Point::xy(0.0, 0.0)).unwrap(), 5.0);
    }

    #[test]
    fn dimension_mismatch() {
        let s = SMetricSpec::usual_1d();
        let err = s.eval(&Point::xy(0.0, 0.0), &Point::scalar(0.0), &Point::scalar(0.0));
        assert_eq!(err, Err(Error::DimensionMismatch { expected: 1, found: 2 }));
    }

    #[test]
    fn dsl_metric() {
        let s = SMetricSpec::dsl("S(x,y,z) = abs(x - z) + abs(y - z)", 1).unwrap();
        assert_eq!(s1(&s, 1.0, 2.0, 3.0), 3.0);
        let bad = SMetricSpec::dsl("ln(x - z)", 1).unwrap();
        let r = bad.eval(&Point::scalar(0.0), &Point::scalar(0.0), &Point::scalar(1.0));
        assert!(matches!(r, Err(Error::MetricEval(_))));
        let neg = SMetricSpec::dsl("x - z", 1).unwrap();
        assert_eq!(s1(&neg, 0.0, 0.0, 1.0), -1.0);
    }

    #[test]
    fn names_round_trip() {
        let empty = BTreeMap::new();
        for name in FAMILY_NAMES.iter().filter(|n| **n != "dsl") {
            let s = SMetricSpec::from_name(name, &empty, None).unwrap();
            assert_eq!(s.name(), *name);
        }
        assert!(matches!(SMetricSpec::from_name("nope", &empty, None), Err(Error::UnknownFamily(_))));
        let mut p = BTreeMap::new();
        p.insert("scale".to_string(), 2.0);
        assert!(SMetricSpec::from_name("usual1d", &p, None).is_err());
        assert!(SMetricSpec::from_name("dsl", &empty, None).is_err());
    }
}

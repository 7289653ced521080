//! The JSON scenario format.
//!
//! A scenario names a metric, an optional self-map, a domain sample, a list of
//! checks with the verdicts they are expected to produce, and the files to
//! write. See `docs/scenario-format.md` for the schema.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use fixcircle_core::mappings::{self, make_multi_circle_map, parse_map};
use fixcircle_core::theorems::{ConditionId, Verdict};
use fixcircle_core::{Circle, PiecewiseMap, Point, SMetricSpec, Window};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bundled;
use crate::error::ScenarioError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    /// Seed for randomized checks; the command line may override it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub metric: MetricRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapRef>,
    #[serde(default)]
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Tolerances::is_default")]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<Output>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricRef {
    pub family: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dsl: Option<String>,
}

impl MetricRef {
    pub fn named(family: impl Into<String>) -> Self {
        MetricRef { family: family.into(), params: BTreeMap::new(), dsl: None }
    }

    pub fn resolve(&self) -> Result<SMetricSpec, ScenarioError> {
        Ok(SMetricSpec::from_name(&self.family, &self.params, self.dsl.as_deref())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MapRef {
    /// A named entry of the built-in catalog, e.g. `"T1"`.
    Catalog(String),
    Dsl(String),
    /// Fix every listed circle and send all other points to `alpha`.
    MultiCircle {
        circles: Vec<CircleRef>,
        alpha: Coords,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleRef {
    pub center: Coords,
    pub radius: f64,
}

impl CircleRef {
    pub fn new(center: Point, radius: f64) -> Self {
        CircleRef { center: Coords(center.coords().to_vec()), radius }
    }

    pub fn resolve(&self, metric: &SMetricSpec) -> Result<Circle, ScenarioError> {
        Ok(Circle::new(self.center.to_point()?, self.radius, metric.clone())?)
    }
}

/// Coordinates of a point: a bare number in dimension 1, an array otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Coords(pub Vec<f64>);

impl Coords {
    pub fn to_point(&self) -> Result<Point, ScenarioError> {
        Ok(Point::new(self.0.clone())?)
    }
}

impl From<&Point> for Coords {
    fn from(p: &Point) -> Self {
        Coords(p.coords().to_vec())
    }
}

impl Serialize for Coords {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.as_slice() {
            [x] => s.serialize_f64(*x),
            xs => xs.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Coords {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Scalar(f64),
            Vector(Vec<f64>),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Scalar(x) => Coords(vec![x]),
            Repr::Vector(v) => Coords(v),
        })
    }
}

/// The sample of the space that checks quantify over. At most one of
/// `step`, `resolution`, `random` and `points` may be given; the first three
/// need `window`. With none of them the sample is empty, which suits
/// scenarios that only solve or trace circles.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    /// Number of seeded uniform points in the window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Coords>>,
}

impl Domain {
    pub fn grid(window: Window, step: f64) -> Self {
        Domain { window: Some(window), step: Some(step), ..Domain::default() }
    }

    pub fn points(points: Vec<Coords>) -> Self {
        Domain { points: Some(points), ..Domain::default() }
    }

    pub fn sample(&self, seed: u64) -> Result<Vec<Point>, ScenarioError> {
        let given = [self.step.is_some(), self.resolution.is_some(), self.random.is_some(), self.points.is_some()];
        match given.iter().filter(|g| **g).count() {
            0 => {
                if let Some(w) = &self.window {
                    w.validate()?;
                }
                return Ok(Vec::new());
            }
            1 => {}
            _ => {
                return Err(ScenarioError::Invalid(
                    "domain takes only one of `step`, `resolution`, `random`, `points`".into(),
                ))
            }
        }
        if let Some(points) = &self.points {
            return points.iter().map(Coords::to_point).collect();
        }
        let window =
            self.window.as_ref().ok_or_else(|| ScenarioError::Invalid("domain grid needs a `window`".into()))?;
        if let Some(step) = self.step {
            Ok(window.grid_step(step)?)
        } else if let Some(res) = self.resolution {
            Ok(window.grid_resolution(res)?)
        } else {
            window.validate()?;
            Ok(window.uniform(self.random.unwrap_or(0), seed))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub tol_strict: f64,
    #[serde(default = "default_point_tol")]
    pub point_tol: f64,
}

fn default_tol() -> f64 {
    fixcircle_core::DEFAULT_TOL
}

fn default_point_tol() -> f64 {
    fixcircle_core::DEFAULT_POINT_TOL
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol: default_tol(), tol_strict: 0.0, point_tol: default_point_tol() }
    }
}

impl Tolerances {
    fn is_default(&self) -> bool {
        *self == Tolerances::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub spec: CheckSpec,
}

impl Check {
    pub fn new(spec: CheckSpec) -> Self {
        Check { label: None, spec }
    }
}

/// How a check obtains the points of a circle.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CircleSampling {
    /// Analytic in dimension 1 where possible, otherwise traced over the
    /// domain window.
    #[default]
    Auto,
    Analytic,
    Traced {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        resolution: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        band_tol: Option<f64>,
    },
    /// The domain points lying on the circle.
    Domain,
}

impl CircleSampling {
    fn is_auto(&self) -> bool {
        *self == CircleSampling::Auto
    }
}

/// Expected outcome of one condition. `holds` accepts both an exhaustive
/// and a sampled pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Holds,
    HoldsOnSample,
    Fails,
    Vacuous,
}

impl Expect {
    pub fn accepts(self, v: Verdict) -> bool {
        match self {
            Expect::Holds => v.holds(),
            Expect::HoldsOnSample => v == Verdict::HoldsOnSample,
            Expect::Fails => v == Verdict::Fails,
            Expect::Vacuous => v == Verdict::Vacuous,
        }
    }
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expect::Holds => "holds",
            Expect::HoldsOnSample => "holds on sample",
            Expect::Fails => "fails",
            Expect::Vacuous => "vacuous",
        })
    }
}

pub type Expectations = BTreeMap<String, Expect>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NearPoint {
    pub point: Coords,
    pub within: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    /// Exact circle on ℝ.
    Solve {
        center: Coords,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_points: Option<Vec<Coords>>,
    },
    /// Grid-traced circle in ℝ² (or ℝ).
    Trace {
        center: Coords,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<Window>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        resolution: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        band_tol: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_min_points: Option<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        expect_near: Vec<NearPoint>,
    },
    /// Fixed points of the map on the domain sample.
    FixedPoints {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_points: Option<Vec<Coords>>,
    },
    /// Pointwise fixedness of one circle.
    CircleFixed {
        center: Coords,
        radius: f64,
        #[serde(default, skip_serializing_if = "CircleSampling::is_auto")]
        sample: CircleSampling,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_fixed: Option<bool>,
    },
    Thm1 {
        center: Coords,
        radius: f64,
        #[serde(default, skip_serializing_if = "CircleSampling::is_auto")]
        sample: CircleSampling,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        expect: Expectations,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_fixed: Option<bool>,
    },
    Thm2 {
        center: Coords,
        radius: f64,
        #[serde(default)]
        h: f64,
        #[serde(default, skip_serializing_if = "CircleSampling::is_auto")]
        sample: CircleSampling,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        expect: Expectations,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_fixed: Option<bool>,
    },
    /// The identity characterisation `I_S` over the domain sample.
    Identity {
        center: Coords,
        #[serde(default = "default_identity_h")]
        h: f64,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        expect: Expectations,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_identity: Option<bool>,
    },
    Rhoades {
        center: Coords,
        radius: f64,
        #[serde(default, skip_serializing_if = "CircleSampling::is_auto")]
        sample: CircleSampling,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        expect: Expectations,
    },
    Diameter {
        center: Coords,
        radius: f64,
        #[serde(default, skip_serializing_if = "CircleSampling::is_auto")]
        sample: CircleSampling,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        expect: Expectations,
    },
    Thm6 {
        center: Coords,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_r: Option<f64>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        expect: Expectations,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_fixed: Option<bool>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_ball_fixed: Option<bool>,
    },
    Discover {
        centers: Vec<Coords>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_circles: Option<Vec<CircleRef>>,
    },
    /// Seeded random axiom and symmetry fuzzing over the domain window.
    Axioms {
        trials: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_clean: Option<bool>,
    },
}

fn default_identity_h() -> f64 {
    3.0
}

impl CheckSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            CheckSpec::Solve { .. } => "solve",
            CheckSpec::Trace { .. } => "trace",
            CheckSpec::FixedPoints { .. } => "fixed_points",
            CheckSpec::CircleFixed { .. } => "circle_fixed",
            CheckSpec::Thm1 { .. } => "thm1",
            CheckSpec::Thm2 { .. } => "thm2",
            CheckSpec::Identity { .. } => "identity",
            CheckSpec::Rhoades { .. } => "rhoades",
            CheckSpec::Diameter { .. } => "diameter",
            CheckSpec::Thm6 { .. } => "thm6",
            CheckSpec::Discover { .. } => "discover",
            CheckSpec::Axioms { .. } => "axioms",
        }
    }

    fn needs_map(&self) -> bool {
        !matches!(self, CheckSpec::Solve { .. } | CheckSpec::Trace { .. } | CheckSpec::Axioms { .. })
    }

    /// Condition ids an `expect` table may name.
    fn conditions(&self) -> &'static [ConditionId] {
        use ConditionId::*;
        match self {
            CheckSpec::Thm1 { .. } => &[Thm1S1, Thm1S2],
            CheckSpec::Thm2 { .. } => &[Thm2S1, Thm2S2],
            CheckSpec::Identity { .. } => &[IdentityIs],
            CheckSpec::Rhoades { .. } => &[RhoadesS25],
            CheckSpec::Diameter { .. } => &[DiamS25a],
            CheckSpec::Thm6 { .. } => &[Eqn1, Eqn2, Eqn2Inner],
            _ => &[],
        }
    }

    fn expectations(&self) -> Option<&Expectations> {
        match self {
            CheckSpec::Thm1 { expect, .. }
            | CheckSpec::Thm2 { expect, .. }
            | CheckSpec::Identity { expect, .. }
            | CheckSpec::Rhoades { expect, .. }
            | CheckSpec::Diameter { expect, .. }
            | CheckSpec::Thm6 { expect, .. } => Some(expect),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Csv,
    Svg,
    Report,
}

/// A file to write, relative to the output directory. `sources` are check
/// labels whose point sets are written (one for CSV, any number for SVG).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub kind: OutputKind,
    pub path: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sources: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
}

/// The live objects a scenario refers to.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub metric: SMetricSpec,
    pub map: Option<PiecewiseMap>,
    pub domain: Vec<Point>,
}

impl Scenario {
    pub fn label(&self, index: usize) -> String {
        self.checks[index].label.clone().unwrap_or_else(|| format!("{}-{}", index + 1, self.checks[index].spec.kind()))
    }

    /// Builds the metric, map and domain sample, checking every reference.
    pub fn resolve(&self, seed: u64) -> Result<Resolved, ScenarioError> {
        let metric = self.metric.resolve()?;
        let map = match &self.map {
            None => None,
            Some(MapRef::Catalog(name)) => {
                Some(mappings::lookup(name).ok_or_else(|| ScenarioError::UnknownCatalogMap(name.clone()))?.map)
            }
            Some(MapRef::Dsl(src)) => Some(parse_map(src, metric.dimension(), Some(&metric))?),
            Some(MapRef::MultiCircle { circles, alpha }) => {
                let circles = circles.iter().map(|c| c.resolve(&metric)).collect::<Result<Vec<_>, _>>()?;
                Some(make_multi_circle_map(&circles, &alpha.to_point()?)?)
            }
        };
        if let Some(m) = &map {
            if m.dimension() != metric.dimension() {
                return Err(ScenarioError::Invalid(format!(
                    "map has dimension {} but metric `{}` has dimension {}",
                    m.dimension(),
                    self.metric.family,
                    metric.dimension()
                )));
            }
        }
        let domain = self.domain.sample(seed)?;
        for p in &domain {
            p.ensure_dim(metric.dimension())?;
        }
        Ok(Resolved { metric, map, domain })
    }

    /// Checks everything that can be checked without running the scenario.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let t = &self.tolerances;
        if !(t.tol > 0.0 && t.point_tol > 0.0 && t.tol_strict >= 0.0) || !(t.tol_strict.is_finite()) {
            return Err(ScenarioError::Invalid("tolerances must be positive (`tol_strict` may be zero)".into()));
        }
        if let Some(res) = self.domain.resolution {
            check_resolution(res)?;
        }
        let resolved = self.resolve(self.seed.unwrap_or(crate::DEFAULT_SEED))?;
        let dim = resolved.metric.dimension();
        let mut labels = BTreeMap::new();
        for (i, check) in self.checks.iter().enumerate() {
            let label = self.label(i);
            if labels.insert(label.clone(), i).is_some() {
                return Err(ScenarioError::Invalid(format!("duplicate check label `{label}`")));
            }
            let bad = |msg: String| ScenarioError::Invalid(format!("check `{label}`: {msg}"));
            if check.spec.needs_map() && resolved.map.is_none() {
                return Err(bad("needs a `map`".into()));
            }
            if let Some(expect) = check.spec.expectations() {
                let allowed = check.spec.conditions();
                for key in expect.keys() {
                    match ConditionId::from_name(key) {
                        Some(c) if allowed.contains(&c) => {}
                        _ => return Err(bad(format!("`{key}` is not a condition of this check"))),
                    }
                }
            }
            for c in check_points(&check.spec) {
                if c.0.len() != dim {
                    return Err(bad(format!("point has {} coordinates, metric has dimension {dim}", c.0.len())));
                }
            }
            match &check.spec {
                CheckSpec::Trace { resolution: Some(r), .. }
                | CheckSpec::CircleFixed { sample: CircleSampling::Traced { resolution: Some(r), .. }, .. }
                | CheckSpec::Thm1 { sample: CircleSampling::Traced { resolution: Some(r), .. }, .. }
                | CheckSpec::Thm2 { sample: CircleSampling::Traced { resolution: Some(r), .. }, .. }
                | CheckSpec::Rhoades { sample: CircleSampling::Traced { resolution: Some(r), .. }, .. }
                | CheckSpec::Diameter { sample: CircleSampling::Traced { resolution: Some(r), .. }, .. } => {
                    check_resolution(*r).map_err(|e| bad(e.to_string()))?
                }
                _ => {}
            }
        }
        for out in &self.outputs {
            for s in &out.sources {
                if !labels.contains_key(s) {
                    return Err(ScenarioError::Invalid(format!("output `{}` names unknown check `{s}`", out.path)));
                }
            }
            let want_one = out.kind == OutputKind::Csv;
            if want_one && out.sources.len() != 1 {
                return Err(ScenarioError::Invalid(format!("CSV output `{}` needs exactly one source", out.path)));
            }
            if Path::new(&out.path).is_absolute() || out.path.split(['/', '\\']).any(|c| c == "..") {
                return Err(ScenarioError::Invalid(format!(
                    "output path `{}` must stay inside the output directory",
                    out.path
                )));
            }
        }
        Ok(())
    }
}

fn check_resolution(res: usize) -> Result<(), ScenarioError> {
    if res < 8 {
        return Err(ScenarioError::Invalid(format!("resolution must be at least 8, got {res}")));
    }
    Ok(())
}

fn check_points(spec: &CheckSpec) -> Vec<&Coords> {
    match spec {
        CheckSpec::Solve { center, expect_points, .. } => {
            std::iter::once(center).chain(expect_points.iter().flatten()).collect()
        }
        CheckSpec::Trace { center, expect_near, .. } => {
            std::iter::once(center).chain(expect_near.iter().map(|n| &n.point)).collect()
        }
        CheckSpec::FixedPoints { expect_points } => expect_points.iter().flatten().collect(),
        CheckSpec::CircleFixed { center, .. }
        | CheckSpec::Thm1 { center, .. }
        | CheckSpec::Thm2 { center, .. }
        | CheckSpec::Identity { center, .. }
        | CheckSpec::Rhoades { center, .. }
        | CheckSpec::Diameter { center, .. }
        | CheckSpec::Thm6 { center, .. } => vec![center],
        CheckSpec::Discover { centers, expect_circles } => {
            centers.iter().chain(expect_circles.iter().flatten().map(|c| &c.center)).collect()
        }
        CheckSpec::Axioms { .. } => Vec::new(),
    }
}

/// Parses and validates scenario JSON.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let scenario: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    scenario.validate()?;
    Ok(scenario)
}

/// Loads a scenario from a file, or by name from the bundled set when no
/// such file exists (`exm6_t1` and `exm6_t1.json` both work).
pub fn load_scenario(path_or_name: &str) -> Result<Scenario, ScenarioError> {
    let path = Path::new(path_or_name);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io(path_or_name.into(), e))?;
        return parse_scenario(&text);
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(path_or_name);
    match bundled::get(stem) {
        Some(text) => parse_scenario(text),
        None => Err(ScenarioError::NotFound(path_or_name.into())),
    }
}

/// Pretty JSON that [`parse_scenario`] reads back to an equal value.
pub fn print_scenario(s: &Scenario) -> String {
    serde_json::to_string_pretty(s).expect("scenario serialization is infallible")
}

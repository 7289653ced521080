//! Sampled falsification of the S-metric axioms and of the symmetry
//! `S(x, x, y) = S(y, y, x)`.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric::SMetricSpec;
use crate::point::{cmp_point_lists, Point};
use crate::sampling::Window;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize), serde(rename_all = "snake_case"))]
pub enum AxiomId {
    /// `S(x, y, z) ≥ 0`; lhs = S, rhs = 0.
    Nonnegativity,
    /// `S(x, y, z) = 0 ⇒ x = y = z`; lhs = S, rhs = largest coordinate gap.
    ZeroImpliesEqual,
    /// `x = y = z ⇒ S(x, y, z) = 0`; lhs = S, rhs = 0.
    EqualImpliesZero,
    /// `S(x, y, z) ≤ S(x, x, a) + S(y, y, a) + S(z, z, a)`.
    Rectangle,
    /// lhs = `S(x, x, y)`, rhs = `S(y, y, x)`.
    Symmetry,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Violation {
    pub axiom: AxiomId,
    pub points: Vec<Point>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AxiomReport {
    pub n_trials: usize,
    /// Total number of violating instances; `violations` keeps at most
    /// [`MAX_RECORDED`] of them.
    pub n_violations: usize,
    pub violations: Vec<Violation>,
}

pub const MAX_RECORDED: usize = 1000;

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.n_violations == 0
    }

    fn record(&mut self, v: Violation) {
        self.n_violations += 1;
        if self.violations.len() < MAX_RECORDED {
            self.violations.push(v);
        }
    }

    fn finish(mut self) -> Self {
        self.violations.sort_by(|a, b| {
            a.axiom
                .cmp(&b.axiom)
                .then_with(|| cmp_point_lists(&a.points, &b.points))
                .then_with(|| a.lhs.total_cmp(&b.lhs))
        });
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomOptions {
    /// Tolerance on metric values.
    pub tol: f64,
    /// Tolerance on coordinates for the `S = 0 ⇒ x = y = z` direction.
    pub tol_pts: f64,
    /// Largest number of quadruples checked for the rectangle axiom; beyond
    /// it a seeded uniform subset of this size is drawn.
    pub quad_budget: usize,
    pub seed: u64,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        AxiomOptions {
            tol: crate::DEFAULT_TOL,
            tol_pts: crate::DEFAULT_POINT_TOL,
            quad_budget: 1_000_000,
            seed: 0x5eed,
        }
    }
}

fn spread(pts: &[&Point]) -> f64 {
    let mut m = 0.0f64;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            m = m.max(p.max_abs_diff(q));
        }
    }
    m
}

fn check_triple(
    spec: &SMetricSpec,
    x: &Point,
    y: &Point,
    z: &Point,
    opts: &AxiomOptions,
    report: &mut AxiomReport,
) -> Result<f64> {
    let s = spec.eval(x, y, z)?;
    let pts = || vec![x.clone(), y.clone(), z.clone()];
    if s < -opts.tol {
        report.record(Violation { axiom: AxiomId::Nonnegativity, points: pts(), lhs: s, rhs: 0.0 });
    }
    let gap = spread(&[x, y, z]);
    if gap == 0.0 {
        if s.abs() > opts.tol {
            report.record(Violation { axiom: AxiomId::EqualImpliesZero, points: pts(), lhs: s, rhs: 0.0 });
        }
    } else if s.abs() <= opts.tol && gap > opts.tol_pts {
        report.record(Violation { axiom: AxiomId::ZeroImpliesEqual, points: pts(), lhs: s, rhs: gap });
    }
    Ok(s)
}

fn check_rectangle(s_xyz: f64, self_to_a: [f64; 3], pts: [&Point; 4], opts: &AxiomOptions, report: &mut AxiomReport) {
    let rhs: f64 = self_to_a.iter().sum();
    if s_xyz > rhs + opts.tol {
        report.record(Violation {
            axiom: AxiomId::Rectangle,
            points: pts.iter().map(|p| (*p).clone()).collect(),
            lhs: s_xyz,
            rhs,
        });
    }
}

fn validate(spec: &SMetricSpec, sample: &[Point]) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    sample.iter().try_for_each(|p| p.ensure_dim(spec.dimension()))
}

/// Checks both axioms over every triple of `sample` and over all quadruples
/// (or a seeded subset when `|sample|⁴` exceeds the budget).
pub fn check_axioms(spec: &SMetricSpec, sample: &[Point], opts: &AxiomOptions) -> Result<AxiomReport> {
    validate(spec, sample)?;
    let n = sample.len();
    let mut report = AxiomReport::default();

    let mut triples = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                triples[(i * n + j) * n + k] =
                    check_triple(spec, &sample[i], &sample[j], &sample[k], opts, &mut report)?;
                report.n_trials += 1;
            }
        }
    }
    // self[i][a] = S(p_i, p_i, p_a)
    let selfd: Vec<f64> = (0..n * n).map(|ia| triples[(ia / n * n + ia / n) * n + ia % n]).collect();

    let quad = |i: usize, j: usize, k: usize, a: usize, report: &mut AxiomReport| {
        let s = triples[(i * n + j) * n + k];
        let to_a = [selfd[i * n + a], selfd[j * n + a], selfd[k * n + a]];
        check_rectangle(s, to_a, [&sample[i], &sample[j], &sample[k], &sample[a]], opts, report);
        report.n_trials += 1;
    };
    let total = n.checked_pow(4);
    match total {
        Some(t) if t <= opts.quad_budget => {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for a in 0..n {
                            quad(i, j, k, a, &mut report);
                        }
                    }
                }
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for _ in 0..opts.quad_budget {
                let (i, j, k, a) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                quad(i, j, k, a, &mut report);
            }
        }
    }
    Ok(report.finish())
}

/// `|S(x, x, y) − S(y, y, x)| ≤ tol` over all ordered pairs.
pub fn check_symmetry(spec: &SMetricSpec, sample: &[Point], tol: f64) -> Result<AxiomReport> {
    validate(spec, sample)?;
    let mut report = AxiomReport::default();
    for x in sample {
        for y in sample {
            symmetry_instance(spec, x, y, tol, &mut report)?;
        }
    }
    Ok(report.finish())
}

fn symmetry_instance(spec: &SMetricSpec, x: &Point, y: &Point, tol: f64, report: &mut AxiomReport) -> Result<()> {
    let a = spec.self_distance(x, y)?;
    let b = spec.self_distance(y, x)?;
    report.n_trials += 1;
    if (a - b).abs() > tol {
        report.record(Violation { axiom: AxiomId::Symmetry, points: vec![x.clone(), y.clone()], lhs: a, rhs: b });
    }
    Ok(())
}

/// Random-instance fuzzing: each trial draws `x, y, z, a` uniformly from
/// `window` and checks nonnegativity, identity, the rectangle inequality and
/// symmetry on `(x, y)`, plus `S(x, x, x) = 0`.
pub fn fuzz_axioms(spec: &SMetricSpec, window: &Window, trials: usize, opts: &AxiomOptions) -> Result<AxiomReport> {
    window.validate()?;
    if window.dim() != spec.dimension() {
        return Err(Error::DimensionMismatch { expected: spec.dimension(), found: window.dim() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut report = AxiomReport::default();
    for _ in 0..trials {
        let [x, y, z, a] = [(); 4].map(|_| window.random_point(&mut rng));
        let s = check_triple(spec, &x, &y, &z, opts, &mut report)?;
        check_triple(spec, &x, &x, &x, opts, &mut report)?;
        let to_a = [spec.self_distance(&x, &a)?, spec.self_distance(&y, &a)?, spec.self_distance(&z, &a)?];
        check_rectangle(s, to_a, [&x, &y, &z, &a], opts, &mut report);
        symmetry_instance(spec, &x, &y, opts.tol, &mut report)?;
    }
    report.n_trials = trials;
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::BaseMetric;

    fn line(lo: f64, hi: f64, step: f64) -> Vec<Point> {
        Window::interval(lo, hi).unwrap().grid_step(step).unwrap()
    }

    #[test]
    fn usual_metric_is_clean_on_grid() {
        let r = check_axioms(&SMetricSpec::usual_1d(), &line(-3.0, 3.0, 0.5), &AxiomOptions::default()).unwrap();
        assert!(r.is_clean(), "{:?}", r.violations.first());
        // 13 points: 13³ triples plus 13⁴ quadruples
        assert_eq!(r.n_trials, 13usize.pow(3) + 13usize.pow(4));
    }

    #[test]
    fn single_point_is_clean() {
        let r = check_axioms(&SMetricSpec::sym_skew_1d(), &[Point::scalar(0.0)], &AxiomOptions::default()).unwrap();
        assert!(r.is_clean());
    }

    #[test]
    fn signed_difference_violates_nonnegativity() {
        let spec = SMetricSpec::dsl("S(x,y,z) = x - z", 1).unwrap();
        let r = check_axioms(&spec, &[Point::scalar(0.0), Point::scalar(1.0)], &AxiomOptions::default()).unwrap();
        assert!(r.violations.iter().any(|v| v.axiom == AxiomId::Nonnegativity
            && v.points == vec![Point::scalar(0.0), Point::scalar(0.0), Point::scalar(1.0)]
            && v.lhs == -1.0));
    }

    #[test]
    fn asymmetric_dsl_detected() {
        // S(0,0,1) = 1 while S(1,1,0) = 2
        let spec = SMetricSpec::dsl("abs(x - z) + abs(y)", 1).unwrap();
        let r = check_symmetry(&spec, &[Point::scalar(0.0), Point::scalar(1.0)], 1e-9).unwrap();
        assert_eq!(r.n_violations, 2);
        assert_eq!(r.violations[0].points, vec![Point::scalar(0.0), Point::scalar(1.0)]);
        assert_eq!((r.violations[0].lhs, r.violations[0].rhs), (1.0, 2.0));
    }

    #[test]
    fn symmetry_margin_zero_on_equal_points() {
        let r = check_symmetry(&SMetricSpec::exp_2d(), &[Point::xy(0.3, -1.0)], 0.0).unwrap();
        assert!(r.is_clean());
    }

    #[test]
    fn quadruple_budget_switches_to_sampling() {
        let opts = AxiomOptions { quad_budget: 500, ..AxiomOptions::default() };
        let sample = line(0.0, 9.0, 1.0);
        let r = check_axioms(&SMetricSpec::usual_1d(), &sample, &opts).unwrap();
        assert_eq!(r.n_trials, 1000 + 500);
        assert_eq!(r, check_axioms(&SMetricSpec::usual_1d(), &sample, &opts).unwrap());
    }

    #[test]
    fn fuzz_builtin_families() {
        let opts = AxiomOptions::default();
        let cases = [
            (SMetricSpec::usual_1d(), Window::interval(-5.0, 5.0).unwrap()),
            (SMetricSpec::sym_skew_2d(), Window::square(-2.0, 2.0).unwrap()),
            (SMetricSpec::exp_2d(), Window::square(-2.0, 2.0).unwrap()),
            (SMetricSpec::generated(BaseMetric::Discrete, 2), Window::square(-1.0, 1.0).unwrap()),
        ];
        for (spec, w) in cases {
            let r = fuzz_axioms(&spec, &w, 500, &opts).unwrap();
            assert!(r.is_clean(), "{}: {:?}", spec.name(), r.violations.first());
        }
    }

    #[test]
    fn fuzz_rejects_wrong_window_dimension() {
        let w = Window::interval(0.0, 1.0).unwrap();
        assert!(fuzz_axioms(&SMetricSpec::exp_2d(), &w, 1, &AxiomOptions::default()).is_err());
    }
}

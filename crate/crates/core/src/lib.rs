//! S-metric spaces, circles and fixed-circle checkers.
//!
//! The crate is `no_std` and only needs `alloc`. Every operation is a pure
//! function of its inputs: metrics evaluate ternary distances over points of
//! ℝⁿ, the [`geometry`] module solves and traces circles
//! `C(x0, r) = {x : S(x, x, x0) = r}`, [`mappings`] parses and evaluates
//! piecewise self-maps, and [`theorems`] turns each existence and uniqueness
//! hypothesis into a checker that reports a verdict together with witnesses.
//!
//! File formats, scenario loading and the command line live in the companion
//! `fixcircle` crate.

#![no_std]

#[cfg(test)]
#[macro_use]
extern crate std;
extern crate alloc;

pub mod axioms;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod mappings;
pub mod metric;
pub mod point;
pub mod sampling;
pub mod theorems;

pub use crate::error::{Error, EvalError, ParseError, Result};
pub use crate::geometry::{Circle, CircleSolution, ClosedBall, OrbitSet, SolutionKind};
pub use crate::mappings::{Guard, PiecewiseMap, Rule};
pub use crate::metric::{BaseMetric, Family, SMetricSpec};
pub use crate::point::Point;
pub use crate::sampling::Window;

/// Default absolute tolerance for value comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default tolerance for coordinate comparisons.
pub const DEFAULT_POINT_TOL: f64 = 1e-7;

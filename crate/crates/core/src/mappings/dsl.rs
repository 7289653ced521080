//! Text form of piecewise maps.
//!
//! ```text
//! map      := rule (";" rule)* [";"]
//! rule     := guard "->" exprlist
//! guard    := "otherwise"
//!           | "x in {" item ("," item)* "}"
//!           | "on_circle(" center "," num ")" | "in_ball(" center "," num ")"
//!           | "abs(x)" (">=" | "<") num
//!           | "x" ("=" | "==") num | "x" INDEX "=" num
//! item     := num | "(" num ("," num)* ")"
//! center   := num | "(" num ("," num)* ")"
//! exprlist := expr ("," expr)*
//! num      := ["-"] decimal ["/" decimal]
//! ```
//!
//! The final rule must be `otherwise`. Circle and ball guards are measured
//! with the metric passed to [`parse_map`].

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::{Guard, PiecewiseMap, Rule, GUARD_CIRCLE_TOL, GUARD_TOL};
use crate::error::{Error, ParseError, Result};
use crate::expr::{describe, write_number, Parser, Tok, Vars};
use crate::geometry::{Circle, ClosedBall};
use crate::metric::SMetricSpec;
use crate::point::Point;

/// Parses a map of the given dimension. `metric` is required by
/// `on_circle` and `in_ball` guards.
pub fn parse_map(source: &str, dimension: usize, metric: Option<&SMetricSpec>) -> Result<PiecewiseMap> {
    if dimension == 0 {
        return Err(Error::InvalidParameter("map dimension must be positive".into()));
    }
    if let Some(m) = metric {
        if m.dimension() != dimension {
            return Err(Error::DimensionMismatch { expected: dimension, found: m.dimension() });
        }
    }
    let mut p = Parser::new(source)?;
    let vars = Vars::map(dimension);
    let mut rules = Vec::new();
    loop {
        if matches!(p.peek(), Tok::Eof) {
            break;
        }
        if matches!(rules.last(), Some(Rule { guard: Guard::Otherwise, .. })) {
            return p.error("`otherwise` must be the last rule").map_err(Error::from);
        }
        let guard = parse_guard(&mut p, vars, metric)?;
        p.expect_sym("->")?;
        let mut exprs = alloc::vec![p.expr(vars)?];
        while p.eat_sym(",") {
            exprs.push(p.expr(vars)?);
        }
        if exprs.len() != dimension {
            return p
                .error(format!(
                    "dimension mismatch: rule yields {} coordinates, map has dimension {dimension}",
                    exprs.len()
                ))
                .map_err(Error::from);
        }
        rules.push(Rule { guard, exprs });
        if !p.eat_sym(";") {
            p.expect_eof()?;
            break;
        }
    }
    if !matches!(rules.last(), Some(Rule { guard: Guard::Otherwise, .. })) {
        return p.error("missing terminal `otherwise` rule").map_err(Error::from);
    }
    PiecewiseMap::new("dsl", dimension, rules)
}

fn parse_tuple(p: &mut Parser, dim: usize) -> core::result::Result<Point, ParseError> {
    let coords = if p.eat_sym("(") {
        let mut v = alloc::vec![p.number()?];
        while p.eat_sym(",") {
            v.push(p.number()?);
        }
        p.expect_sym(")")?;
        v
    } else {
        alloc::vec![p.number()?]
    };
    if coords.len() != dim {
        return p.error(format!("dimension mismatch: point has {} coordinates, map has dimension {dim}", coords.len()));
    }
    Point::new(coords).or_else(|e| p.error(format!("{e}")))
}

fn parse_guard(p: &mut Parser, vars: Vars, metric: Option<&SMetricSpec>) -> Result<Guard> {
    let name = match p.peek() {
        Tok::Ident(name) => name.clone(),
        t => return p.error(format!("expected a guard, found {}", describe(t))).map_err(Error::from),
    };
    match name.as_str() {
        "otherwise" => {
            p.bump();
            Ok(Guard::Otherwise)
        }
        "on_circle" | "in_ball" => {
            p.bump();
            let Some(metric) = metric else {
                return p.error(format!("`{name}` needs a metric")).map_err(Error::from);
            };
            p.expect_sym("(")?;
            let center = parse_tuple(p, vars.dim)?;
            p.expect_sym(",")?;
            let radius = p.number()?;
            p.expect_sym(")")?;
            if !radius.is_finite() || radius <= 0.0 {
                return p.error(format!("radius must be positive, got {radius}")).map_err(Error::from);
            }
            Ok(if name == "on_circle" {
                Guard::OnCircle { circle: Circle::new(center, radius, metric.clone())?, tol: GUARD_CIRCLE_TOL }
            } else {
                Guard::InClosedBall { ball: ClosedBall::new(center, radius, metric.clone())?, tol: GUARD_CIRCLE_TOL }
            })
        }
        "abs" => {
            p.bump();
            if vars.dim != 1 {
                return p.error("`abs(x)` guards are only valid in dimension 1").map_err(Error::from);
            }
            p.expect_sym("(")?;
            match p.peek() {
                Tok::Ident(v) if v == "x" || v == "x1" => {
                    p.bump();
                }
                t => return p.error(format!("expected `x`, found {}", describe(t))).map_err(Error::from),
            }
            p.expect_sym(")")?;
            if p.eat_sym(">=") {
                Ok(Guard::AbsAtLeast(p.number()?))
            } else if p.eat_sym("<") {
                Ok(Guard::AbsLessThan(p.number()?))
            } else {
                p.error("expected `>=` or `<`").map_err(Error::from)
            }
        }
        _ => {
            if name == "x" && matches!(p.peek_at(1), Tok::Ident(k) if k == "in") {
                p.bump();
                p.bump();
                p.expect_sym("{")?;
                let mut points = alloc::vec![parse_tuple(p, vars.dim)?];
                while p.eat_sym(",") {
                    points.push(parse_tuple(p, vars.dim)?);
                }
                p.expect_sym("}")?;
                return Ok(Guard::InFiniteSet { points, tol: GUARD_TOL });
            }
            let (_, index) = p.variable(&name, vars)?;
            p.bump();
            if !(p.eat_sym("==") || p.eat_sym("=")) {
                return p.error("expected `=` or `==`").map_err(Error::from);
            }
            if name == "x" && vars.dim != 1 {
                return p.error("use `x1 = ...` in dimension > 1").map_err(Error::from);
            }
            let value = p.number()?;
            Ok(Guard::CoordEquals { index, value, tol: GUARD_TOL })
        }
    }
}

fn write_point(f: &mut fmt::Formatter<'_>, p: &Point) -> fmt::Result {
    match p.coords() {
        [x] => write_number(f, *x),
        cs => {
            f.write_str("(")?;
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_number(f, *c)?;
            }
            f.write_str(")")
        }
    }
}

/// DSL rendering of a map; see [`PiecewiseMap::display`].
pub struct MapDisplay<'a>(&'a PiecewiseMap);

impl PiecewiseMap {
    pub fn display(&self) -> MapDisplay<'_> {
        MapDisplay(self)
    }
}

impl fmt::Display for MapDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let map = self.0;
        let vars = Vars::map(map.dimension());
        for (i, rule) in map.rules().iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            match &rule.guard {
                Guard::Otherwise => f.write_str("otherwise")?,
                Guard::InFiniteSet { points, .. } => {
                    f.write_str("x in {")?;
                    for (k, pt) in points.iter().enumerate() {
                        if k > 0 {
                            f.write_str(", ")?;
                        }
                        write_point(f, pt)?;
                    }
                    f.write_str("}")?;
                }
                Guard::OnCircle { circle, .. } => {
                    f.write_str("on_circle(")?;
                    write_point(f, circle.center())?;
                    f.write_str(", ")?;
                    write_number(f, circle.radius())?;
                    f.write_str(")")?;
                }
                Guard::InClosedBall { ball, .. } => {
                    f.write_str("in_ball(")?;
                    write_point(f, ball.center())?;
                    f.write_str(", ")?;
                    write_number(f, ball.radius())?;
                    f.write_str(")")?;
                }
                Guard::AbsAtLeast(t) => {
                    f.write_str("abs(x) >= ")?;
                    write_number(f, *t)?;
                }
                Guard::AbsLessThan(t) => {
                    f.write_str("abs(x) < ")?;
                    write_number(f, *t)?;
                }
                Guard::CoordEquals { index, value, .. } => {
                    if map.dimension() == 1 {
                        f.write_str("x = ")?;
                    } else {
                        write!(f, "x{} = ", index + 1)?;
                    }
                    write_number(f, *value)?;
                }
            }
            f.write_str(" -> ")?;
            for (k, e) in rule.exprs.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", e.display(vars))?;
            }
        }
        Ok(())
    }
}

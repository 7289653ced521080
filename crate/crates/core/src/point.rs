use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

/// A finite point of ℝⁿ, n ≥ 1.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "Vec<f64>", into = "Vec<f64>")
)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("dimension must be at least 1".into()));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(format!("non-finite coordinate {c}")));
        }
        Ok(Point(coords))
    }

    /// Panics on a non-finite value; intended for literals.
    pub fn scalar(x: f64) -> Self {
        Point::new(alloc::vec![x]).expect("finite scalar")
    }

    /// Panics on non-finite values; intended for literals.
    pub fn xy(x: f64, y: f64) -> Self {
        Point::new(alloc::vec![x, y]).expect("finite pair")
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found: self.dim() })
        }
    }

    /// Chebyshev distance between coordinate vectors.
    pub fn max_abs_diff(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| libm::fabs(a - b)).fold(0.0, f64::max)
    }

    pub fn max_abs_coord(&self) -> f64 {
        self.0.iter().map(|c| libm::fabs(*c)).fold(0.0, f64::max)
    }

    /// Lexicographic total order used for canonical sorting.
    pub fn cmp_lex(&self, other: &Point) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.dim().cmp(&other.dim())
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [x] = self.0.as_slice() {
            return write!(f, "{x}");
        }
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

pub(crate) fn cmp_point_lists(a: &[Point], b: &[Point]) -> Ordering {
    for (p, q) in a.iter().zip(b) {
        match p.cmp_lex(q) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(Point::new(vec![]).is_err());
        assert!(Point::new(vec![f64::NAN]).is_err());
        assert!(Point::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(Point::new(vec![1.0, -2.0]).is_ok());
    }

    #[test]
    fn lexicographic_order() {
        let a = Point::xy(0.0, 1.0);
        let b = Point::xy(0.0, 2.0);
        let c = Point::xy(-1.0, 5.0);
        assert_eq!(a.cmp_lex(&b), Ordering::Less);
        assert_eq!(c.cmp_lex(&a), Ordering::Less);
        assert_eq!(a.cmp_lex(&a), Ordering::Equal);
    }

    #[test]
    fn display() {
        assert_eq!(Point::scalar(-1.5).to_string(), "-1.5");
        assert_eq!(Point::xy(1.0, 0.0).to_string(), "(1, 0)");
    }
}

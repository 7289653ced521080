//! Axis-aligned windows, grids and seeded random samples.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::point::Point;

/// Axis-aligned box `[lo₁, hi₁] × … × [loₙ, hiₙ]` with positive extent.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Window {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Window {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let w = Window { lo, hi };
        w.validate()?;
        Ok(w)
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![lo], alloc::vec![hi])
    }

    pub fn square(lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![lo, lo], alloc::vec![hi, hi])
    }

    pub fn validate(&self) -> Result<()> {
        if self.lo.is_empty() || self.lo.len() != self.hi.len() {
            return Err(Error::InvalidWindow(format!(
                "bounds have dimensions {} and {}",
                self.lo.len(),
                self.hi.len()
            )));
        }
        for (a, b) in self.lo.iter().zip(&self.hi) {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::InvalidWindow(format!("empty or non-finite extent [{a}, {b}]")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Coordinate of node `i` of `n` cells on axis `axis`.
    pub fn node(&self, axis: usize, i: usize, n: usize) -> f64 {
        let (a, b) = (self.lo[axis], self.hi[axis]);
        if i == n {
            b
        } else {
            a + (b - a) * i as f64 / n as f64
        }
    }

    /// Cartesian grid `lo + k·step` (both ends included when they fall on
    /// the lattice), last axis varying fastest.
    pub fn grid_step(&self, step: f64) -> Result<Vec<Point>> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidParameter(format!("grid step must be positive, got {step}")));
        }
        let axes: Vec<Vec<f64>> = (0..self.dim())
            .map(|a| {
                let n = libm::floor((self.hi[a] - self.lo[a]) / step + 1e-9) as usize;
                (0..=n).map(|k| self.lo[a] + k as f64 * step).collect()
            })
            .collect();
        Ok(cartesian(&axes))
    }

    /// `(resolution + 1)ⁿ` evenly spaced nodes.
    pub fn grid_resolution(&self, resolution: usize) -> Result<Vec<Point>> {
        if resolution == 0 {
            return Err(Error::InvalidParameter("resolution must be positive".into()));
        }
        let axes: Vec<Vec<f64>> =
            (0..self.dim()).map(|a| (0..=resolution).map(|i| self.node(a, i, resolution)).collect()).collect();
        Ok(cartesian(&axes))
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Point {
        let coords = self.lo.iter().zip(&self.hi).map(|(a, b)| rng.gen_range(*a..*b)).collect();
        Point::new(coords).expect("window bounds are finite")
    }

    /// `n` uniform points from a ChaCha8 stream seeded with `seed`.
    pub fn uniform(&self, n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.random_point(&mut rng)).collect()
    }
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Point> {
    let mut out: Vec<Vec<f64>> = alloc::vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(|c| Point::new(c).expect("finite grid")).collect()
}

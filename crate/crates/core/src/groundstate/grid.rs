use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform one-dimensional grid `x_min, x_min + h, ..., x_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Default for Grid {
    /// `[-8, 8]` with 4001 points.
    fn default() -> Self {
        Self { x_min: -8.0, x_max: 8.0, n_points: 4001 }
    }
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        let grid = Self { x_min, x_max, n_points };
        grid.validate()?;
        Ok(grid)
    }

    /// Grid on `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    /// Symmetric grid with (approximately) the requested spacing; the point
    /// count is rounded so that `x = 0` is a node.
    pub fn with_spacing(half_width: f64, spacing: f64) -> Result<Self> {
        let half = (half_width / spacing).round() as usize;
        Self::symmetric(half_width, 2 * half + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 3 {
            return Err(Error::InvalidParameter(format!("grid needs >= 3 points, got {}", self.n_points)));
        }
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must satisfy x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        // Interpolating from both ends keeps x_max exact.
        let t = i as f64 / (self.n_points - 1) as f64;
        self.x_min * (1.0 - t) + self.x_max * t
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (self.x_min + self.x_max).abs() <= 1e-12 * self.x_max.abs()
    }

    /// Sub-grid covering the central `fraction` of the nodes.
    pub fn interior(&self, fraction: f64) -> (usize, usize) {
        let drop = (((1.0 - fraction) * self.n_points as f64) / 2.0).round() as usize;
        (drop, self.n_points - drop)
    }
}

/// Trapezoid rule on uniformly spaced samples.
pub fn trapezoid(values: &[f64], spacing: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => spacing * (values[1..n - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[n - 1])),
    }
}

/// Trapezoid rule on arbitrary abscissae.
pub fn trapezoid_xy(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

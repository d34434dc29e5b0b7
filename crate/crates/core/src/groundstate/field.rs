use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::spline::UniformCubicSpline;

/// How a field was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    /// Spline through one value per grid node.
    TabulatedOnGrid,
    /// Spline through odd-symmetric knot coefficients.
    OddSpline,
}

/// Osmotic velocity `u(x)` in reduced units.
///
/// Backed by a natural cubic spline, so `u'` and `u''` are analytic; outside
/// the knot range the field continues linearly with its boundary slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OsmoticVelocityField {
    representation: Representation,
    spline: UniformCubicSpline,
}

impl OsmoticVelocityField {
    /// Field through `values` at the nodes of `grid`.
    pub fn tabulated(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.n_points {
            return Err(Error::InvalidParameter(format!(
                "expected {} values, got {}",
                grid.n_points,
                values.len()
            )));
        }
        Ok(Self {
            representation: Representation::TabulatedOnGrid,
            spline: UniformCubicSpline::new(grid.x_min, grid.spacing(), values)?,
        })
    }

    /// Tabulates `f` on `grid`.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::tabulated(grid, grid.points().into_iter().map(f).collect())
    }

    /// Odd field with `u(0) = 0` and `u(k h) = coefficients[k - 1]`.
    pub fn odd_spline(spacing: f64, coefficients: &[f64]) -> Result<Self> {
        let k = coefficients.len();
        let mut values = Vec::with_capacity(2 * k + 1);
        values.extend(coefficients.iter().rev().map(|c| -c));
        values.push(0.0);
        values.extend_from_slice(coefficients);
        Ok(Self {
            representation: Representation::OddSpline,
            spline: UniformCubicSpline::new(-(k as f64) * spacing, spacing, values)?,
        })
    }

    /// The harmonic ground state `u(x) = -x`.
    pub fn harmonic() -> Self {
        Self::odd_spline(1.0, &[-1.0, -2.0]).expect("static coefficients")
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn spline(&self) -> &UniformCubicSpline {
        &self.spline
    }

    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        self.spline.value(x)
    }

    /// `(u, u', u'')` at `x`.
    #[inline]
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        self.spline.eval(x)
    }

    pub fn sample(&self, grid: &Grid) -> Vec<f64> {
        (0..grid.n_points).map(|i| self.value(grid.point(i))).collect()
    }

    /// Reconstructs cached spline data after deserialization.
    pub fn rebuild(self) -> Result<Self> {
        Ok(Self {
            representation: self.representation,
            spline: self.spline.rebuild()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_field_is_minus_x_everywhere() {
        let u = OsmoticVelocityField::harmonic();
        for x in [-12.0, -1.5, 0.0, 0.3, 7.0] {
            let (v, d, c) = u.eval(x);
            assert!((v + x).abs() < 1e-12);
            assert!((d + 1.0).abs() < 1e-12);
            assert!(c.abs() < 1e-12);
        }
    }

    #[test]
    fn odd_spline_is_odd() {
        let u = OsmoticVelocityField::odd_spline(0.5, &[-0.4, -0.9, -1.1, -1.2, -1.25]).unwrap();
        for i in 0..100 {
            let x = i as f64 * 0.071;
            assert!((u.value(x) + u.value(-x)).abs() < 1e-13);
        }
        assert!(u.value(10.0) < 0.0 && u.value(-10.0) > 0.0);
    }

    #[test]
    fn tabulated_length_mismatch() {
        let g = Grid::new(-1.0, 1.0, 5).unwrap();
        assert!(OsmoticVelocityField::tabulated(&g, vec![0.0; 4]).is_err());
    }
}

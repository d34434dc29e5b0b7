//! Natural cubic spline on uniformly spaced knots.
//!
//! Outside the knot range the spline continues linearly with its end slope,
//! which is C2 because the natural end condition sets `s'' = 0` there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiag::thomas_solve;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformCubicSpline {
    x_min: f64,
    spacing: f64,
    values: Vec<f64>,
    #[serde(skip)]
    second: Vec<f64>,
}

impl UniformCubicSpline {
    pub fn new(x_min: f64, spacing: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidParameter("spline needs at least two knots".into()));
        }
        if !(spacing.is_finite() && spacing > 0.0) || !x_min.is_finite() {
            return Err(Error::InvalidParameter(format!("bad spline spacing {spacing}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("spline knot value"));
        }
        let second = natural_second_derivatives(&values, spacing);
        Ok(Self { x_min, spacing, values, second })
    }

    /// Rebuilds the cached second derivatives after deserialization.
    pub fn rebuild(self) -> Result<Self> {
        Self::new(self.x_min, self.spacing, self.values)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_min + self.spacing * (self.values.len() - 1) as f64
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn knot(&self, i: usize) -> f64 {
        self.x_min + self.spacing * i as f64
    }

    pub fn value(&self, x: f64) -> f64 {
        self.eval(x).0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.eval(x).1
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        self.eval(x).2
    }

    /// Value, first and second derivative at `x`.
    #[inline]
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let n = self.values.len();
        let x_max = self.x_max();
        if x < self.x_min {
            let (s, d, _) = self.eval_segment(0, 0.0);
            return (s + d * (x - self.x_min), d, 0.0);
        }
        if x > x_max {
            let (s, d, _) = self.eval_segment(n - 2, 1.0);
            return (s + d * (x - x_max), d, 0.0);
        }
        let pos = (x - self.x_min) / self.spacing;
        let i = (pos.floor() as usize).min(n - 2);
        self.eval_segment(i, pos - i as f64)
    }

    #[inline]
    fn eval_segment(&self, i: usize, t: f64) -> (f64, f64, f64) {
        let h = self.spacing;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let s = 1.0 - t;
        let value = s * y0 + t * y1 + h * h / 6.0 * ((s * s * s - s) * m0 + (t * t * t - t) * m1);
        let slope = (y1 - y0) / h + h / 6.0 * (-(3.0 * s * s - 1.0) * m0 + (3.0 * t * t - 1.0) * m1);
        let curv = s * m0 + t * m1;
        (value, slope, curv)
    }
}

fn natural_second_derivatives(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    let inner = n - 2;
    let sub = vec![1.0; inner];
    let diag = vec![4.0; inner];
    let sup = vec![1.0; inner];
    let mut rhs: Vec<f64> = (1..n - 1)
        .map(|i| 6.0 * (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (h * h))
        .collect();
    thomas_solve(&sub, &diag, &sup, &mut rhs);
    m[1..n - 1].copy_from_slice(&rhs);
    m
}

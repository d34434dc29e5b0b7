use serde::{Deserialize, Serialize};

use super::grid::{trapezoid, trapezoid_xy, Grid};
use super::field::OsmoticVelocityField;
use crate::error::{Error, Result};
use crate::potential::TrapPotential;

/// Largest exponent `exp` can take without overflowing.
const LN_MAX: f64 = 709.0;

/// A probability density sampled on increasing abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub x: Vec<f64>,
    pub values: Vec<f64>,
}

impl Density {
    pub fn new(x: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if x.len() != values.len() || x.len() < 2 {
            return Err(Error::InvalidParameter("density needs matching abscissae, >= 2 points".into()));
        }
        Ok(Self { x, values })
    }

    pub fn integral(&self) -> f64 {
        trapezoid_xy(&self.x, &self.values)
    }

    pub fn mean(&self) -> f64 {
        let w: Vec<f64> = self.x.iter().zip(&self.values).map(|(x, p)| x * p).collect();
        trapezoid_xy(&self.x, &w) / self.integral()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        let w: Vec<f64> = self.x.iter().zip(&self.values).map(|(x, p)| (x - mu).powi(2) * p).collect();
        trapezoid_xy(&self.x, &w) / self.integral()
    }

    /// Linear interpolation, zero outside the support.
    pub fn at(&self, x: f64) -> f64 {
        let n = self.x.len();
        if x < self.x[0] || x > self.x[n - 1] {
            return 0.0;
        }
        let j = self.x.partition_point(|&xi| xi <= x).clamp(1, n - 1);
        let (x0, x1) = (self.x[j - 1], self.x[j]);
        let t = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
        self.values[j - 1] * (1.0 - t) + self.values[j] * t
    }

    /// `sqrt(integral (self - other)^2 dx)` on this density's abscissae.
    pub fn l2_distance(&self, other: &Density) -> f64 {
        let diff: Vec<f64> = self.x.iter().zip(&self.values).map(|(x, p)| (p - other.at(*x)).powi(2)).collect();
        trapezoid_xy(&self.x, &diff).sqrt()
    }
}

/// Stationary density `rho(x) = N exp(2 int_0^x u)` on `grid`.
///
/// The cumulative integral uses the trapezoid rule and `N` normalizes the
/// trapezoid integral of `rho` to one.
pub fn density_from_osmotic(u: &OsmoticVelocityField, grid: &Grid) -> Result<Density> {
    grid.validate()?;
    let values = u.sample(grid);
    density_from_values(grid, &values)
}

pub(crate) fn density_from_values(grid: &Grid, u: &[f64]) -> Result<Density> {
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("osmotic velocity"));
    }
    let h = grid.spacing();
    let n = grid.n_points;
    let mut log_rho = vec![0.0; n];
    for i in 1..n {
        log_rho[i] = log_rho[i - 1] + h * (u[i - 1] + u[i]);
    }
    // Reference the exponent to the node closest to x = 0.
    let origin = ((-grid.x_min) / h).round().clamp(0.0, (n - 1) as f64) as usize;
    let offset = log_rho[origin];
    let max = log_rho.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if !max.is_finite() || max - offset > LN_MAX {
        return Err(Error::NonNormalizable(format!(
            "exponent {:.3e} overflows; u is not confining on [{}, {}]",
            max - offset,
            grid.x_min,
            grid.x_max
        )));
    }
    let mut rho: Vec<f64> = log_rho.iter().map(|l| (l - max).exp()).collect();
    let norm = trapezoid(&rho, h);
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::NonNormalizable(format!("normalization integral {norm}")));
    }
    rho.iter_mut().for_each(|r| *r /= norm);
    Density::new(grid.points(), rho)
}

/// Stochastic energy `int (u^2 / 2 + V) rho dx` in units of `hbar omega`.
pub fn expected_energy<P: TrapPotential + ?Sized>(
    u: &OsmoticVelocityField,
    pot: &P,
    grid: &Grid,
) -> Result<f64> {
    let values = u.sample(grid);
    energy_from_values(grid, &values, pot)
}

pub(crate) fn energy_from_values<P: TrapPotential + ?Sized>(grid: &Grid, u: &[f64], pot: &P) -> Result<f64> {
    let rho = density_from_values(grid, u)?;
    let integrand: Vec<f64> = rho
        .x
        .iter()
        .zip(u)
        .zip(&rho.values)
        .map(|((&x, &ui), &r)| (0.5 * ui * ui + pot.value(x)) * r)
        .collect();
    Ok(trapezoid(&integrand, grid.spacing()))
}

/// Momentum variance `int u^2 rho - (int u rho)^2` for a real stationary state.
pub(crate) fn momentum_variance(grid: &Grid, u: &[f64], rho: &Density) -> f64 {
    let h = grid.spacing();
    let m1: Vec<f64> = u.iter().zip(&rho.values).map(|(a, r)| a * r).collect();
    let m2: Vec<f64> = u.iter().zip(&rho.values).map(|(a, r)| a * a * r).collect();
    let mean = trapezoid(&m1, h);
    trapezoid(&m2, h) - mean * mean
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Potential;
    use std::f64::consts::PI;

    #[test]
    fn harmonic_density_is_gaussian() {
        let grid = Grid::default();
        let rho = density_from_osmotic(&OsmoticVelocityField::harmonic(), &grid).unwrap();
        for (x, r) in rho.x.iter().zip(&rho.values).step_by(97) {
            let exact = (-x * x).exp() / PI.sqrt();
            assert!((r - exact).abs() < 1e-10, "{x} {r} {exact}");
        }
        assert!((rho.variance() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn zero_field_gives_uniform_density() {
        let grid = Grid::new(-2.0, 3.0, 101).unwrap();
        let u = OsmoticVelocityField::from_fn(&grid, |_| 0.0).unwrap();
        let rho = density_from_osmotic(&u, &grid).unwrap();
        for r in rho.values {
            assert!((r - 0.2).abs() < 1e-14);
        }
    }

    #[test]
    fn harmonic_energy_is_one_half() {
        let e = expected_energy(&OsmoticVelocityField::harmonic(), &Potential::harmonic(), &Grid::default()).unwrap();
        assert!((e - 0.5).abs() < 1e-6, "{e}");
    }

    #[test]
    fn scaled_field_raises_energy() {
        let grid = Grid::default();
        let u = OsmoticVelocityField::from_fn(&grid, |x| -1.1 * x).unwrap();
        let e = expected_energy(&u, &Potential::harmonic(), &grid).unwrap();
        // Analytic: (1.1 + 1 / 1.1) / 4.
        assert!(e > 0.5);
        assert!((e - (1.1 + 1.0 / 1.1) / 4.0).abs() < 1e-8, "{e}");
    }

    #[test]
    fn anti_confining_field_overflows() {
        let grid = Grid::default();
        let u = OsmoticVelocityField::from_fn(&grid, |x| 20.0 * x).unwrap();
        assert!(matches!(density_from_osmotic(&u, &grid), Err(Error::NonNormalizable(_))));
    }

    #[test]
    fn non_finite_field_is_rejected() {
        let grid = Grid::new(-1.0, 1.0, 3).unwrap();
        assert!(density_from_values(&grid, &[0.0, f64::NAN, 0.0]).is_err());
    }
}

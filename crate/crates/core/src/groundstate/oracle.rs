//! Finite-difference Schrödinger eigensolver used as an independent check
//! on the variational solver.

use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::potential::TrapPotential;
use crate::tridiag::lowest_eigenpair;

/// Default bound on `|psi0|^2` at the outermost interior nodes.
pub const BOUNDARY_DENSITY_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleSolution {
    pub grid: Grid,
    pub energy: f64,
    /// Ground-state wave function, positive, with `sum psi^2 h = 1`.
    pub psi: Vec<f64>,
    /// `u0 = (1/2) d ln psi^2 / dx` by central differences.
    pub u: Vec<f64>,
}

impl OracleSolution {
    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|p| p * p).collect()
    }
}

/// Lowest eigenpair of `-psi''/2 + V psi` with Dirichlet boundaries just
/// outside `grid`.
pub fn schrodinger_fd_oracle<P: TrapPotential + ?Sized>(pot: &P, grid: &Grid) -> Result<OracleSolution> {
    schrodinger_fd_oracle_with_limit(pot, grid, BOUNDARY_DENSITY_LIMIT)
}

pub fn schrodinger_fd_oracle_with_limit<P: TrapPotential + ?Sized>(
    pot: &P,
    grid: &Grid,
    boundary_limit: f64,
) -> Result<OracleSolution> {
    grid.validate()?;
    let h = grid.spacing();
    let kinetic = 0.5 / (h * h);
    let xs = grid.points();
    let diag: Vec<f64> = xs.iter().map(|&x| 2.0 * kinetic + pot.value(x)).collect();
    let off = vec![-kinetic; grid.n_points - 1];
    let (energy, mut psi) = lowest_eigenpair(&diag, &off);
    let scale = h.sqrt();
    psi.iter_mut().for_each(|p| *p = (*p / scale).abs());

    let n = grid.n_points;
    let boundary_density = (psi[0] * psi[0]).max(psi[n - 1] * psi[n - 1]);
    if boundary_density > boundary_limit {
        return Err(Error::GridTooSmall { boundary_density, threshold: boundary_limit });
    }

    let ln: Vec<f64> = psi.iter().map(|p| p.max(f64::MIN_POSITIVE).ln()).collect();
    let mut u = vec![0.0; n];
    for i in 1..n - 1 {
        u[i] = (ln[i + 1] - ln[i - 1]) / (2.0 * h);
    }
    u[0] = u[1];
    u[n - 1] = u[n - 2];
    Ok(OracleSolution { grid: *grid, energy, psi, u })
}

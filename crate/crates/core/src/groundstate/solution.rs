use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::density::Density;
use super::field::OsmoticVelocityField;
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::potential::Potential;

/// Converged ground state: field, density and derived observables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundStateSolution {
    /// `None` for user-supplied potentials.
    pub potential: Option<Potential>,
    pub grid: Grid,
    pub energy: f64,
    pub sigma_x: f64,
    pub sigma_p: f64,
    /// `sigma_x * sigma_p` in units of hbar.
    pub uncertainty_product: f64,
    pub generations: usize,
    pub evaluations: usize,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub rho: Vec<f64>,
    pub u0: OsmoticVelocityField,
}

impl GroundStateSolution {
    pub fn density(&self) -> Density {
        Density { x: self.x.clone(), values: self.rho.clone() }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut sol: Self = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        sol.u0 = sol.u0.rebuild()?;
        Ok(sol)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

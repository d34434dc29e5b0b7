use serde::{Deserialize, Serialize};

use super::density::{density_from_values, energy_from_values, momentum_variance};
use super::field::OsmoticVelocityField;
use super::grid::Grid;
use super::optimizer::{minimize, EvolutionConfig};
use super::solution::GroundStateSolution;
use crate::error::{Error, Result};
use crate::potential::{Potential, TrapPotential};

/// Maps a flat parameter vector onto an osmotic velocity field.
pub trait FieldParametrization: Sync {
    fn dim(&self) -> usize;
    /// Starting point of the search.
    fn initial(&self) -> Vec<f64>;
    fn build(&self, params: &[f64]) -> Result<OsmoticVelocityField>;
}

/// Odd natural cubic spline with knots at `k * spacing`, `k = 1..=n_knots`,
/// initialized at the harmonic field `u = -x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OddSplineParametrization {
    pub spacing: f64,
    pub n_knots: usize,
}

impl Default for OddSplineParametrization {
    fn default() -> Self {
        Self { spacing: 0.5, n_knots: 12 }
    }
}

impl FieldParametrization for OddSplineParametrization {
    fn dim(&self) -> usize {
        self.n_knots
    }

    fn initial(&self) -> Vec<f64> {
        (1..=self.n_knots).map(|k| -(k as f64) * self.spacing).collect()
    }

    fn build(&self, params: &[f64]) -> Result<OsmoticVelocityField> {
        OsmoticVelocityField::odd_spline(self.spacing, params)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    pub grid: Grid,
    pub parametrization: OddSplineParametrization,
    pub evolution: EvolutionConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid: Grid::default(),
            parametrization: OddSplineParametrization::default(),
            evolution: EvolutionConfig::default(),
        }
    }
}

/// Minimizes the stochastic energy over odd spline fields.
pub fn solve_ground_state(pot: &Potential, config: &SolverConfig) -> Result<GroundStateSolution> {
    pot.validate()?;
    let mut sol = solve_with(pot, &config.grid, &config.parametrization, &config.evolution);
    match &mut sol {
        Ok(s) => s.potential = Some(*pot),
        Err(Error::NotConverged { best, .. }) => best.potential = Some(*pot),
        Err(_) => {}
    }
    sol
}

/// Parametrization- and potential-agnostic entry point.
pub fn solve_with<P, F>(pot: &P, grid: &Grid, param: &F, evolution: &EvolutionConfig) -> Result<GroundStateSolution>
where
    P: TrapPotential + ?Sized,
    F: FieldParametrization,
{
    grid.validate()?;
    let points = grid.points();
    let objective = |params: &[f64]| -> f64 {
        let Ok(field) = param.build(params) else {
            return f64::INFINITY;
        };
        let u: Vec<f64> = points.iter().map(|&x| field.value(x)).collect();
        // Confinement: the field must point inwards at both ends of the grid.
        if !(u[0] > 0.0 && u[u.len() - 1] < 0.0) {
            return f64::INFINITY;
        }
        energy_from_values(grid, &u, pot).unwrap_or(f64::INFINITY)
    };
    let min = minimize(objective, &param.initial(), evolution);
    if !min.value.is_finite() {
        return Err(Error::NonNormalizable("no confining candidate found".into()));
    }
    let field = param.build(&min.x)?;
    let solution = summarize(pot, grid, field, min.generations, min.evaluations)?;
    if min.converged {
        Ok(solution)
    } else {
        Err(Error::NotConverged {
            iterations: min.generations,
            best_energy: solution.energy,
            best: Box::new(solution),
        })
    }
}

/// Evaluates density, energy and uncertainties of a given field.
pub fn summarize<P: TrapPotential + ?Sized>(
    pot: &P,
    grid: &Grid,
    field: OsmoticVelocityField,
    generations: usize,
    evaluations: usize,
) -> Result<GroundStateSolution> {
    let u = field.sample(grid);
    let rho = density_from_values(grid, &u)?;
    let energy = energy_from_values(grid, &u, pot)?;
    let sigma_x = rho.variance().sqrt();
    let sigma_p = momentum_variance(grid, &u, &rho).sqrt();
    Ok(GroundStateSolution {
        potential: None,
        grid: *grid,
        energy,
        sigma_x,
        sigma_p,
        uncertainty_product: sigma_x * sigma_p,
        generations,
        evaluations,
        x: rho.x,
        u,
        rho: rho.values,
        u0: field,
    })
}

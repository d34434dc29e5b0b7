//! Variational ground state of the stationary stochastic-mechanics control
//! problem, with a finite-difference Schrödinger oracle as cross-check.

mod density;
mod field;
mod grid;
mod oracle;
pub mod optimizer;
mod solution;
mod solver;
mod uncertainty;

pub use density::{density_from_osmotic, expected_energy, Density};
pub use field::{OsmoticVelocityField, Representation};
pub use grid::{trapezoid, trapezoid_xy, Grid};
pub use oracle::{schrodinger_fd_oracle, schrodinger_fd_oracle_with_limit, OracleSolution, BOUNDARY_DENSITY_LIMIT};
pub use solution::GroundStateSolution;
pub use solver::{solve_ground_state, solve_with, summarize, FieldParametrization, OddSplineParametrization, SolverConfig};
pub use uncertainty::{uncertainties, Uncertainties};

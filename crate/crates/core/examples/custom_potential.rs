//! Plugs a user-defined trap into the solver and the finite-difference
//! oracle. The quartic-plus-harmonic well here has no closed-form ground
//! state.
//!
//! cargo run --release --example custom_potential -- [lambda]

use stochmech::groundstate::{schrodinger_fd_oracle, solve_with, Grid, OddSplineParametrization, SolverConfig};
use stochmech::CustomPotential;

fn main() -> stochmech::Result<()> {
    let lambda: f64 = std::env::args().nth(1).map_or(0.1, |a| a.parse().expect("numeric lambda"));
    let anharmonic = CustomPotential::new(
        move |x: f64| 0.5 * x * x + lambda * x.powi(4),
        move |x: f64| x + 4.0 * lambda * x.powi(3),
    );
    let config = SolverConfig::default();
    let sol = solve_with(&anharmonic, &config.grid, &OddSplineParametrization::default(), &config.evolution)?;
    let oracle = schrodinger_fd_oracle(&anharmonic, &Grid::with_spacing(10.0, 0.01)?)?;
    println!("V = x^2/2 + {lambda} x^4");
    println!("solver E0 = {:.6}   FD E0 = {:.6}", sol.energy, oracle.energy);
    println!("sigma_x = {:.5}  sigma_p = {:.5}  product = {:.5}", sol.sigma_x, sol.sigma_p, sol.uncertainty_product);
    for x in [0.5, 1.0, 1.5, 2.0] {
        println!("u0({x}) = {:+.5}", sol.u0.value(x));
    }
    Ok(())
}

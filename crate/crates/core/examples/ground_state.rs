//! Solves the variational ground state for all three traps and compares
//! each energy with the finite-difference eigenvalue.
//!
//! cargo run --release --example ground_state

use std::time::Instant;

use stochmech::groundstate::{schrodinger_fd_oracle, solve_ground_state, Grid, SolverConfig};
use stochmech::{Potential, PotentialKind};

fn main() -> stochmech::Result<()> {
    let config = SolverConfig::default();
    let oracle_grid = Grid::with_spacing(10.0, 0.01)?;
    println!("{:<11} {:>10} {:>10} {:>9} {:>9} {:>9} {:>6} {:>8}", "potential", "E0 solver", "E0 FD", "sigma_x", "sigma_p", "product", "gens", "time");
    for kind in PotentialKind::ALL {
        let pot = Potential::reduced(kind);
        let start = Instant::now();
        let sol = solve_ground_state(&pot, &config)?;
        let elapsed = start.elapsed();
        let oracle = schrodinger_fd_oracle(&pot, &oracle_grid)?;
        println!(
            "{:<11} {:>10.6} {:>10.6} {:>9.5} {:>9.5} {:>9.5} {:>6} {:>7.2}s",
            kind.name(),
            sol.energy,
            oracle.energy,
            sol.sigma_x,
            sol.sigma_p,
            sol.uncertainty_product,
            sol.generations,
            elapsed.as_secs_f64()
        );
        let dev = (0..=300).map(|i| -3.0 + 0.02 * i as f64).map(|x| (sol.u0.value(x) + x).abs()).fold(0.0, f64::max);
        println!("            max |u0(x) + x| on |x| <= 3: {dev:.4}");
    }
    Ok(())
}

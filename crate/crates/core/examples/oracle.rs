//! Finite-difference ground state of each trap, with the osmotic field
//! read off the wave function.
//!
//! cargo run --release --example oracle -- [spacing]

use stochmech::groundstate::{schrodinger_fd_oracle, Grid};
use stochmech::{Potential, PotentialKind};

fn main() -> stochmech::Result<()> {
    let h: f64 = std::env::args().nth(1).map_or(0.01, |a| a.parse().expect("numeric spacing"));
    let grid = Grid::with_spacing(10.0, h)?;
    println!("grid: {} points, spacing {h}", grid.n_points);
    for kind in PotentialKind::ALL {
        let sol = schrodinger_fd_oracle(&Potential::reduced(kind), &grid)?;
        let rho = sol.density();
        let var: f64 = sol.grid.points().iter().zip(&rho).map(|(x, r)| x * x * r * h).sum();
        let mid = grid.n_points / 2;
        let at = |x: f64| sol.u[mid + (x / h).round() as usize];
        println!(
            "{:<11} E0 = {:.6}  <x^2> = {var:.4}  u(1) = {:+.4}  u(2) = {:+.4}",
            kind.name(),
            sol.energy,
            at(1.0),
            at(2.0)
        );
    }
    Ok(())
}

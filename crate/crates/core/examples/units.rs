//! Converts reduced quantities to SI for a given particle and trap.
//!
//! cargo run --example units -- [mass_kg] [trap_frequency_hz]

use std::f64::consts::PI;

use stochmech::{Dimension, UnitSystem};

fn main() -> stochmech::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("numeric argument"));
    let mass = args.next().unwrap_or(2.8e-18);
    let f_trap = args.next().unwrap_or(1e7);
    let units = UnitSystem::new(mass, 2.0 * PI * f_trap)?;
    println!("m = {mass:e} kg, omega = 2 pi x {f_trap:e} Hz");
    for dim in [Dimension::Length, Dimension::Momentum, Dimension::Time, Dimension::Energy, Dimension::Velocity, Dimension::Frequency] {
        println!("{:<9} 1 reduced = {:e}", dim.to_string(), units.to_si(1.0, dim));
    }
    let td = units.from_si(32e-9, Dimension::Time);
    println!("32 ns damping time = {td:.4} reduced");
    println!("reduced frequency 1.0 = {:.4e} Hz", units.to_si(1.0, Dimension::Frequency));
    Ok(())
}

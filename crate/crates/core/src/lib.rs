//! Stochastic-mechanics simulation of an optically levitated nanoparticle.
//!
//! The crate solves the variational ground-state problem for harmonic,
//! Gaussian and Lorentzian traps, samples phase-space paths of the coupled
//! forward SDEs with a seeded Heun integrator, and analyses the paths with
//! autocorrelation, power spectra and visitation histograms.

pub mod cli;
pub mod error;
pub mod groundstate;
pub mod potential;
pub mod sde;
pub mod spline;
pub mod timeseries;
mod tridiag;
pub mod units;

pub use error::{Error, Result};
pub use potential::{CustomPotential, Potential, PotentialKind, TrapPotential};
pub use units::{Dimension, UnitSystem};

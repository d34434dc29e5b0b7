//! Reduced harmonic-oscillator units and their conversion to SI.
//!
//! Lengths are measured in `sqrt(hbar / (m omega))`, momenta in
//! `sqrt(hbar m omega)`, times in `1 / omega` and energies in `hbar omega`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant in J s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Mass of the levitated silica sphere (70 nm diameter).
pub const DEFAULT_MASS_KG: f64 = 2.8e-18;

/// Default trap angular frequency, `2 pi * 10 MHz`.
pub const DEFAULT_OMEGA_RAD_S: f64 = 2.0 * PI * 1.0e7;

/// Physical dimension of a reduced quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Length,
    Momentum,
    Time,
    Energy,
    Velocity,
    /// Cycles per unit time (Hz in SI).
    Frequency,
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "length" => Ok(Dimension::Length),
            "momentum" => Ok(Dimension::Momentum),
            "time" => Ok(Dimension::Time),
            "energy" => Ok(Dimension::Energy),
            "velocity" => Ok(Dimension::Velocity),
            "frequency" => Ok(Dimension::Frequency),
            other => Err(Error::UnknownDimension(other.to_string())),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dimension::Length => "length",
            Dimension::Momentum => "momentum",
            Dimension::Time => "time",
            Dimension::Energy => "energy",
            Dimension::Velocity => "velocity",
            Dimension::Frequency => "frequency",
        };
        f.write_str(s)
    }
}

/// Reference scales derived from the particle mass and trap frequency.
///
/// Only `(mass, omega)` are stored; every scale is recomputed on demand so
/// the two can never drift apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnitSystem {
    pub mass_kg: f64,
    pub omega_rad_s: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self {
            mass_kg: DEFAULT_MASS_KG,
            omega_rad_s: DEFAULT_OMEGA_RAD_S,
        }
    }
}

impl UnitSystem {
    pub fn new(mass_kg: f64, omega_rad_s: f64) -> Result<Self> {
        if !(mass_kg.is_finite() && mass_kg > 0.0) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass_kg}")));
        }
        if !(omega_rad_s.is_finite() && omega_rad_s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega must be positive, got {omega_rad_s}"
            )));
        }
        Ok(Self { mass_kg, omega_rad_s })
    }

    /// Length scale `sqrt(hbar / (m omega))` in m.
    pub fn length(&self) -> f64 {
        (HBAR / (self.mass_kg * self.omega_rad_s)).sqrt()
    }

    /// Momentum scale `sqrt(hbar m omega)` in kg m/s.
    pub fn momentum(&self) -> f64 {
        (HBAR * self.mass_kg * self.omega_rad_s).sqrt()
    }

    /// Time scale `1 / omega` in s.
    pub fn time(&self) -> f64 {
        1.0 / self.omega_rad_s
    }

    /// Energy scale `hbar omega` in J.
    pub fn energy(&self) -> f64 {
        HBAR * self.omega_rad_s
    }

    /// Velocity scale `p0 / m` in m/s.
    pub fn velocity(&self) -> f64 {
        self.momentum() / self.mass_kg
    }

    /// Frequency scale `1 / t0` in Hz.
    pub fn frequency(&self) -> f64 {
        self.omega_rad_s
    }

    pub fn scale(&self, dimension: Dimension) -> f64 {
        match dimension {
            Dimension::Length => self.length(),
            Dimension::Momentum => self.momentum(),
            Dimension::Time => self.time(),
            Dimension::Energy => self.energy(),
            Dimension::Velocity => self.velocity(),
            Dimension::Frequency => self.frequency(),
        }
    }

    pub fn to_si(&self, value: f64, dimension: Dimension) -> f64 {
        value * self.scale(dimension)
    }

    pub fn from_si(&self, value: f64, dimension: Dimension) -> f64 {
        value / self.scale(dimension)
    }

    /// String-keyed variant of [`UnitSystem::to_si`].
    pub fn to_si_named(&self, value: f64, dimension: &str) -> Result<f64> {
        Ok(self.to_si(value, dimension.parse()?))
    }

    pub fn from_si_named(&self, value: f64, dimension: &str) -> Result<f64> {
        Ok(self.from_si(value, dimension.parse()?))
    }
}

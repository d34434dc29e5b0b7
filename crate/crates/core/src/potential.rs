//! Trap potentials in reduced units.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything that can act as a one-dimensional trap: a value and its derivative.
///
/// Implemented by [`Potential`] and by [`CustomPotential`] for user-supplied
/// closures, so the solver and the oracle accept new trap shapes unchanged.
pub trait TrapPotential: Sync {
    fn value(&self, x: f64) -> f64;
    fn gradient(&self, x: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    Harmonic,
    Gaussian,
    Lorentzian,
}

impl PotentialKind {
    pub const ALL: [PotentialKind; 3] = [
        PotentialKind::Harmonic,
        PotentialKind::Gaussian,
        PotentialKind::Lorentzian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PotentialKind::Harmonic => "harmonic",
            PotentialKind::Gaussian => "gaussian",
            PotentialKind::Lorentzian => "lorentzian",
        }
    }
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PotentialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "harmonic" => Ok(PotentialKind::Harmonic),
            "gaussian" => Ok(PotentialKind::Gaussian),
            "lorentzian" => Ok(PotentialKind::Lorentzian),
            other => Err(Error::InvalidParameter(format!("unknown potential kind `{other}`"))),
        }
    }
}

/// One of the three trap profiles with depth `v0` and squared width `x0_sq`.
///
/// All three share the small-`x` expansion `v0 x^2 / (2 x0_sq)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    pub kind: PotentialKind,
    pub v0: f64,
    pub x0_sq: f64,
}

impl Potential {
    pub fn new(kind: PotentialKind, v0: f64, x0_sq: f64) -> Result<Self> {
        let pot = Self { kind, v0, x0_sq };
        pot.validate()?;
        Ok(pot)
    }

    /// Reduced-unit defaults: `v0 = 1`, `x0_sq = 1`.
    pub fn reduced(kind: PotentialKind) -> Self {
        Self { kind, v0: 1.0, x0_sq: 1.0 }
    }

    pub fn harmonic() -> Self {
        Self::reduced(PotentialKind::Harmonic)
    }

    pub fn gaussian() -> Self {
        Self::reduced(PotentialKind::Gaussian)
    }

    pub fn lorentzian() -> Self {
        Self::reduced(PotentialKind::Lorentzian)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v0.is_finite() && self.v0 > 0.0) {
            return Err(Error::InvalidParameter(format!("potential v0 must be > 0, got {}", self.v0)));
        }
        if !(self.x0_sq.is_finite() && self.x0_sq > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "potential x0_sq must be > 0, got {}",
                self.x0_sq
            )));
        }
        Ok(())
    }

    /// Checked evaluation of `V(x)`.
    pub fn potential_value(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFinite("potential position"));
        }
        self.validate()?;
        Ok(self.value(x))
    }

    /// Checked evaluation of `V'(x)`.
    pub fn potential_gradient(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFinite("potential position"));
        }
        self.validate()?;
        Ok(self.gradient(x))
    }
}

impl TrapPotential for Potential {
    #[inline]
    fn value(&self, x: f64) -> f64 {
        let a = x * x / (2.0 * self.x0_sq);
        match self.kind {
            PotentialKind::Harmonic => self.v0 * a,
            PotentialKind::Gaussian => -self.v0 * (-a).exp_m1(),
            PotentialKind::Lorentzian => self.v0 * a / (a + 1.0),
        }
    }

    #[inline]
    fn gradient(&self, x: f64) -> f64 {
        let slope = self.v0 * x / self.x0_sq;
        match self.kind {
            PotentialKind::Harmonic => slope,
            PotentialKind::Gaussian => slope * (-x * x / (2.0 * self.x0_sq)).exp(),
            PotentialKind::Lorentzian => {
                let d = x * x / (2.0 * self.x0_sq) + 1.0;
                slope / (d * d)
            }
        }
    }
}

/// A trap given by a user-supplied value/gradient pair.
pub struct CustomPotential<F, G> {
    value: F,
    gradient: G,
}

impl<F, G> CustomPotential<F, G>
where
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
{
    pub fn new(value: F, gradient: G) -> Self {
        Self { value, gradient }
    }
}

impl<F, G> TrapPotential for CustomPotential<F, G>
where
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
{
    fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    fn gradient(&self, x: f64) -> f64 {
        (self.gradient)(x)
    }
}

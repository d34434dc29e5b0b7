//! The phase-space systems of the simulator. State is `[x, p]` in reduced
//! units; every system drives both components with the same increment `dW+`.

use serde::{Deserialize, Serialize};

use super::system::SdeSystem;
use crate::error::{Error, Result};
use crate::groundstate::OsmoticVelocityField;

/// Forward ground-state process for a stationary field `u`:
///
/// `dx = p dt + dW`, `dp = (u'(x) p + u''(x) / 2) dt + u'(x) dW`,
/// where `p` tracks `u(x(t))` by Itô's formula.
#[derive(Debug, Clone)]
pub struct GroundStateSystem {
    field: OsmoticVelocityField,
}

pub fn ground_state_system(u: OsmoticVelocityField) -> GroundStateSystem {
    GroundStateSystem { field: u }
}

impl GroundStateSystem {
    pub fn field(&self) -> &OsmoticVelocityField {
        &self.field
    }

    /// Starting point `(x0, u(x0))` on the manifold `p = u(x)`.
    pub fn consistent_initial(&self, x0: f64) -> [f64; 2] {
        [x0, self.field.value(x0)]
    }
}

impl SdeSystem<2, 1> for GroundStateSystem {
    #[inline]
    fn drift(&self, _t: f64, s: &[f64; 2]) -> [f64; 2] {
        let (_, du, d2u) = self.field.eval(s[0]);
        [s[1], du * s[1] + 0.5 * d2u]
    }

    #[inline]
    fn diffusion(&self, _t: f64, s: &[f64; 2]) -> [[f64; 1]; 2] {
        let (_, du, _) = self.field.eval(s[0]);
        [[1.0], [du]]
    }

    #[inline]
    fn stratonovich_correction(&self, _t: f64, s: &[f64; 2]) -> [f64; 2] {
        // Only the p-row depends on the state, through x: d_x u'(x) * 1.
        let (_, _, d2u) = self.field.eval(s[0]);
        [0.0, 0.5 * d2u]
    }

    fn describe(&self) -> String {
        "ground-state".into()
    }
}

/// Harmonic ground state: `dx = -x dt + dW`, `dp = -p dt - dW`.
#[derive(Debug, Clone, Copy, Default)]
pub struct OuSystem;

pub fn ou_system() -> OuSystem {
    OuSystem
}

impl SdeSystem<2, 1> for OuSystem {
    #[inline]
    fn drift(&self, _t: f64, s: &[f64; 2]) -> [f64; 2] {
        [-s[0], -s[1]]
    }

    #[inline]
    fn diffusion(&self, _t: f64, _s: &[f64; 2]) -> [[f64; 1]; 2] {
        // u'(x) = -1 for u = -x, hence -dW in the momentum row.
        [[1.0], [-1.0]]
    }

    fn describe(&self) -> String {
        "ornstein-uhlenbeck".into()
    }
}

/// Classical orbit `x_cl = A sin t e^{-t/t_d}`, `p_cl = A cos t e^{-t/t_d}`.
///
/// `damping_time = None` is the conservative orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalTrajectory {
    pub amplitude: f64,
    pub damping_time: Option<f64>,
}

/// Sample of a classical orbit and its time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPoint {
    pub x: f64,
    pub p: f64,
    pub dx: f64,
    pub dp: f64,
}

impl ClassicalTrajectory {
    pub fn conservative(amplitude: f64) -> Self {
        Self { amplitude, damping_time: None }
    }

    pub fn at_rest() -> Self {
        Self::conservative(0.0)
    }

    #[inline]
    pub fn at(&self, t: f64) -> OrbitPoint {
        let (sin, cos) = t.sin_cos();
        let (env, rate) = match self.damping_time {
            Some(td) => ((-t / td).exp(), 1.0 / td),
            None => (1.0, 0.0),
        };
        let a = self.amplitude * env;
        OrbitPoint {
            x: a * sin,
            p: a * cos,
            dx: a * (cos - rate * sin),
            dp: a * (-sin - rate * cos),
        }
    }

    /// Classical energy `(x_cl^2 + p_cl^2) / 2`.
    pub fn energy(&self, t: f64) -> f64 {
        let o = self.at(t);
        0.5 * (o.x * o.x + o.p * o.p)
    }
}

/// Damped orbit used to model feedback cooling. `damping_time` is reduced.
pub fn cooling_trajectory(amplitude: f64, damping_time: f64) -> Result<ClassicalTrajectory> {
    if !(damping_time.is_finite() && damping_time > 0.0) {
        return Err(Error::InvalidParameter(format!("damping time must be > 0, got {damping_time}")));
    }
    if !amplitude.is_finite() {
        return Err(Error::NonFinite("amplitude"));
    }
    Ok(ClassicalTrajectory { amplitude, damping_time: Some(damping_time) })
}

/// Ground-state fluctuations around a classical orbit:
///
/// `dx = (p_cl - (x - x_cl)) dt + dW`, `dp = (-p + dx_cl/dt + dp_cl/dt) dt - dW`.
#[derive(Debug, Clone, Copy)]
pub struct CoherentSystem {
    orbit: ClassicalTrajectory,
}

pub fn coherent_system(traj: ClassicalTrajectory) -> CoherentSystem {
    CoherentSystem { orbit: traj }
}

impl CoherentSystem {
    pub fn orbit(&self) -> &ClassicalTrajectory {
        &self.orbit
    }
}

impl SdeSystem<2, 1> for CoherentSystem {
    #[inline]
    fn drift(&self, t: f64, s: &[f64; 2]) -> [f64; 2] {
        let o = self.orbit.at(t);
        [o.p - (s[0] - o.x), -s[1] + o.dx + o.dp]
    }

    #[inline]
    fn diffusion(&self, _t: f64, _s: &[f64; 2]) -> [[f64; 1]; 2] {
        [[1.0], [-1.0]]
    }

    fn describe(&self) -> String {
        match self.orbit.damping_time {
            None => format!("coherent(amplitude={})", self.orbit.amplitude),
            Some(td) => format!("cooling(amplitude={}, t_d={})", self.orbit.amplitude, td),
        }
    }
}

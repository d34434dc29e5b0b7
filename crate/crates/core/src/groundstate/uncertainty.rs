use serde::{Deserialize, Serialize};

use super::density::Density;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Uncertainties {
    pub sigma_x: f64,
    pub sigma_p: f64,
    /// `sigma_x * sigma_p` in units of hbar.
    pub product: f64,
}

/// Standard deviations of a position and a momentum density.
pub fn uncertainties(rho_x: &Density, rho_p: &Density) -> Result<Uncertainties> {
    for rho in [rho_x, rho_p] {
        let total = rho.integral();
        if !((total - 1.0).abs() <= 1e-3) {
            return Err(Error::Unnormalized(total));
        }
    }
    let sigma_x = rho_x.variance().sqrt();
    let sigma_p = rho_p.variance().sqrt();
    Ok(Uncertainties { sigma_x, sigma_p, product: sigma_x * sigma_p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groundstate::Grid;
    use std::f64::consts::PI;

    fn gaussian(var: f64) -> Density {
        let x = Grid::new(-10.0, 10.0, 4001).unwrap().points();
        let values = x.iter().map(|x| (-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()).collect();
        Density { x, values }
    }

    #[test]
    fn minimum_uncertainty_pair() {
        let u = uncertainties(&gaussian(0.5), &gaussian(0.5)).unwrap();
        assert!((u.product - 0.5).abs() < 1e-10);
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let mut rho = gaussian(0.5);
        rho.values.iter_mut().for_each(|v| *v *= 1.01);
        assert!(matches!(uncertainties(&rho, &gaussian(0.5)), Err(Error::Unnormalized(_))));
    }
}

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::spectrum::{AxisUnits, Spectrum, SpectrumKind};
use crate::error::{Error, Result};

/// Lag window applied to the ACF before transforming.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LagWindow {
    #[default]
    Rectangular,
    Bartlett,
    Hann,
}

impl LagWindow {
    /// Weight at lag index `k` of `0..=last`.
    pub fn weight(self, k: usize, last: usize) -> f64 {
        let r = k as f64 / last as f64;
        match self {
            LagWindow::Rectangular => 1.0,
            LagWindow::Bartlett => 1.0 - r,
            LagWindow::Hann => 0.5 * (1.0 + (std::f64::consts::PI * r).cos()),
        }
    }
}

/// A PSD plus the imaginary part left over by the transform.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdEstimate {
    pub psd: Spectrum,
    /// `max |Im| / max |Re|` of the raw transform; round-off only for an
    /// even input.
    pub imag_residue: f64,
    /// Bins where estimation noise drove the transform below zero; they are
    /// reported as zero.
    pub clipped_bins: usize,
}

/// Wiener-Khinchin PSD of an ACF with the rectangular lag window.
pub fn power_spectral_density(acf: &Spectrum) -> Result<Spectrum> {
    Ok(psd_with_window(acf, LagWindow::Rectangular)?.psd)
}

/// PSD `S(f) = int r(tau) cos(2 pi f tau) dtau` over `[-T, T]`.
///
/// The ACF on lags `0..=L` is mirrored to an even sequence of length `2L`
/// and transformed; bins `f_k = k / (2 L dtau)` for `k = 0..=L` are returned.
pub fn psd_with_window(acf: &Spectrum, window: LagWindow) -> Result<PsdEstimate> {
    if acf.kind != SpectrumKind::Acf {
        return Err(Error::InvalidParameter("PSD input must be an ACF".into()));
    }
    if acf.units != AxisUnits::Reduced {
        return Err(Error::InvalidParameter("PSD input must use reduced lags".into()));
    }
    let dtau = acf.spacing()?;
    let last = acf.len() - 1;
    let n = 2 * last;
    let weighted: Vec<f64> = acf.values.iter().enumerate().map(|(k, r)| r * window.weight(k, last)).collect();
    let mut buf: Vec<Complex<f64>> = (0..n)
        .map(|j| Complex::new(if j <= last { weighted[j] } else { weighted[n - j] }, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let re_max = buf.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
    let im_max = buf.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    let mut clipped_bins = 0;
    let values = buf[..=last]
        .iter()
        .map(|c| {
            let s = dtau * c.re;
            if s < 0.0 {
                clipped_bins += 1;
                0.0
            } else {
                s
            }
        })
        .collect();
    let df = 1.0 / (n as f64 * dtau);
    let psd = Spectrum {
        kind: SpectrumKind::Psd,
        units: AxisUnits::Reduced,
        axis: (0..=last).map(|k| k as f64 * df).collect(),
        values,
        n_windows: acf.n_windows,
        noise_floor: None,
    };
    let imag_residue = if re_max > 0.0 { im_max / re_max } else { 0.0 };
    Ok(PsdEstimate { psd, imag_residue, clipped_bins })
}

/// Adds a white floor `level` to every bin.
pub fn add_noise_floor(psd: &Spectrum, level: f64) -> Result<Spectrum> {
    if psd.kind != SpectrumKind::Psd {
        return Err(Error::InvalidParameter("noise floor applies to a PSD".into()));
    }
    if !(level.is_finite() && level >= 0.0) {
        return Err(Error::InvalidParameter(format!("noise level must be >= 0, got {level}")));
    }
    let mut out = psd.clone();
    out.values.iter_mut().for_each(|v| *v += level);
    out.noise_floor = Some(psd.noise_floor.unwrap_or(0.0) + level);
    Ok(out)
}

/// First frequency at which the floor-free PSD falls to `level`, linearly
/// interpolated between bins. `None` if it never does.
pub fn crossover_frequency(psd: &Spectrum, level: f64) -> Option<f64> {
    let floor = psd.noise_floor.unwrap_or(0.0);
    let s = |k: usize| psd.values[k] - floor;
    if s(0) <= level {
        return Some(psd.axis[0]);
    }
    (1..psd.len()).find(|&k| s(k) <= level).map(|k| {
        let (s0, s1) = (s(k - 1), s(k));
        let w = (s0 - level) / (s0 - s1);
        psd.axis[k - 1] + w * (psd.axis[k] - psd.axis[k - 1])
    })
}

/// Floor level that puts the crossover at `frequency` (same axis units as
/// `psd`), i.e. the floor-free PSD interpolated there.
pub fn floor_for_crossover(psd: &Spectrum, frequency: f64) -> Result<f64> {
    let floor = psd.noise_floor.unwrap_or(0.0);
    psd.value_at(frequency)
        .map(|v| v - floor)
        .ok_or_else(|| Error::InvalidParameter(format!("frequency {frequency} lies outside the PSD axis")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn exp_acf(dt: f64, t_max: f64) -> Spectrum {
        let n = (t_max / dt).round() as usize;
        Spectrum::acf_from_values((0..=n).map(|k| (-(k as f64) * dt).exp()).collect(), dt).unwrap()
    }

    #[test]
    fn exponential_acf_gives_lorentzian() {
        let est = psd_with_window(&exp_acf(1e-3, 20.0), LagWindow::Rectangular).unwrap();
        assert!(est.imag_residue < 1e-10);
        assert_eq!(est.clipped_bins, 0);
        for (f, s) in est.psd.axis.iter().zip(&est.psd.values).filter(|(f, _)| **f <= 10.0) {
            let exact = 2.0 / (1.0 + (2.0 * PI * f).powi(2));
            assert!((s / exact - 1.0).abs() < 2e-3, "f={f} {s} {exact}");
        }
    }

    #[test]
    fn delta_acf_gives_flat_psd() {
        let mut v = vec![0.0; 65];
        v[0] = 1.0;
        let psd = power_spectral_density(&Spectrum::acf_from_values(v, 0.5).unwrap()).unwrap();
        assert!(psd.values.iter().all(|s| (s - 0.5).abs() < 1e-14));
    }

    #[test]
    fn parseval_holds_for_every_window() {
        for w in [LagWindow::Rectangular, LagWindow::Bartlett, LagWindow::Hann] {
            let psd = psd_with_window(&exp_acf(0.01, 10.0), w).unwrap().psd;
            assert!((psd.parseval_integral().unwrap() - 1.0).abs() < 1e-10, "{w:?}");
        }
    }

    #[test]
    fn floor_and_crossover() {
        let psd = power_spectral_density(&exp_acf(1e-3, 30.0)).unwrap();
        assert_eq!(add_noise_floor(&psd, 0.0).unwrap().values, psd.values);
        let level = psd.values[0] / 100.0;
        let noisy = add_noise_floor(&psd, level).unwrap();
        let f = crossover_frequency(&noisy, level).unwrap();
        assert!((f - 99f64.sqrt() / (2.0 * PI)).abs() < 5e-3, "{f}");
        let back = floor_for_crossover(&psd, f).unwrap();
        assert!((back / level - 1.0).abs() < 1e-3);
        assert!(add_noise_floor(&psd, -1.0).is_err());
    }

    #[test]
    fn rejects_non_uniform_lags() {
        let mut acf = exp_acf(0.1, 1.0);
        acf.axis[4] += 0.01;
        assert!(matches!(power_spectral_density(&acf), Err(Error::NonUniformLags)));
    }
}

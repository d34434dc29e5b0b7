use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Acf,
    Psd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisUnits {
    Reduced,
    Si,
}

/// An autocorrelation (over lags) or a power spectral density (over
/// frequencies). ACFs are normalized to one at lag zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub kind: SpectrumKind,
    pub units: AxisUnits,
    pub axis: Vec<f64>,
    pub values: Vec<f64>,
    /// Windows averaged into the estimate; zero for closed-form input.
    pub n_windows: usize,
    pub noise_floor: Option<f64>,
}

impl Spectrum {
    /// ACF sampled on lags `k * dt`.
    pub fn acf_from_values(values: Vec<f64>, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!("lag spacing must be > 0, got {dt}")));
        }
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        let axis = (0..values.len()).map(|k| k as f64 * dt).collect();
        Ok(Self { kind: SpectrumKind::Acf, units: AxisUnits::Reduced, axis, values, n_windows: 0, noise_floor: None })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Axis spacing, or `NonUniformLags` if the axis is not a uniform grid.
    pub fn spacing(&self) -> Result<f64> {
        if self.axis.len() < 2 {
            return Err(Error::SeriesTooShort("spectrum needs at least two points".into()));
        }
        let h = (self.axis[self.axis.len() - 1] - self.axis[0]) / (self.axis.len() - 1) as f64;
        let uniform = self
            .axis
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(f64::MIN_POSITIVE));
        if !uniform || h <= 0.0 {
            return Err(Error::NonUniformLags);
        }
        Ok(h)
    }

    /// Linear interpolation on the axis; `None` outside it.
    pub fn value_at(&self, at: f64) -> Option<f64> {
        let i = self.axis.partition_point(|&a| a <= at);
        if i == 0 || (i == self.axis.len() && at > self.axis[i - 1]) {
            return None;
        }
        if i == self.axis.len() {
            return self.values.last().copied();
        }
        let (a0, a1) = (self.axis[i - 1], self.axis[i]);
        let w = (at - a0) / (a1 - a0);
        Some(self.values[i - 1] * (1.0 - w) + self.values[i] * w)
    }

    /// Two-sided spectral integral `df * (S_0 + 2 sum S_k + S_L)`.
    ///
    /// Equals ACF(0) for a PSD built from an ACF; the noise floor, if any,
    /// is excluded.
    pub fn parseval_integral(&self) -> Result<f64> {
        let df = self.spacing()?;
        let floor = self.noise_floor.unwrap_or(0.0);
        let n = self.values.len();
        let inner: f64 = self.values[1..n - 1].iter().map(|v| v - floor).sum();
        Ok(df * (self.values[0] - floor + 2.0 * inner + self.values[n - 1] - floor))
    }

    /// Converts axis and values to SI using `units`.
    pub fn to_si(&self, units: &UnitSystem) -> Spectrum {
        if self.units == AxisUnits::Si {
            return self.clone();
        }
        let t0 = units.time();
        let mut out = self.clone();
        out.units = AxisUnits::Si;
        match self.kind {
            SpectrumKind::Acf => out.axis.iter_mut().for_each(|a| *a *= t0),
            SpectrumKind::Psd => {
                out.axis.iter_mut().for_each(|f| *f /= t0);
                out.values.iter_mut().for_each(|v| *v *= t0);
                out.noise_floor = self.noise_floor.map(|l| l * t0);
            }
        }
        out
    }

    /// Writes a `lag_or_freq,value` CSV with LF line endings.
    pub fn write_csv(&self, file: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(fs::File::create(file)?);
        out.write_all(b"lag_or_freq,value\n")?;
        for (a, v) in self.axis.iter().zip(&self.values) {
            writeln!(out, "{a},{v}")?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a `lag_or_freq,value` CSV. Metadata not stored in the file is
    /// taken from the arguments.
    pub fn read_csv(file: impl AsRef<Path>, kind: SpectrumKind, units: AxisUnits) -> Result<Self> {
        let file = file.as_ref();
        let mut lines = BufReader::new(fs::File::open(file)?).lines();
        let header = lines.next().transpose()?.unwrap_or_default();
        if header.trim() != "lag_or_freq,value" {
            return Err(Error::Format(format!("{}: unexpected header `{header}`", file.display())));
        }
        let (mut axis, mut values) = (Vec::new(), Vec::new());
        for (n, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed = line
                .split_once(',')
                .and_then(|(a, v)| Some((a.trim().parse::<f64>().ok()?, v.trim().parse::<f64>().ok()?)));
            let (a, v) = parsed.ok_or_else(|| Error::Format(format!("{}:{}: bad row `{line}`", file.display(), n + 2)))?;
            axis.push(a);
            values.push(v);
        }
        Ok(Self { kind, units, axis, values, n_windows: 0, noise_floor: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_and_bounds() {
        let s = Spectrum::acf_from_values(vec![1.0, 0.5, 0.0], 0.5).unwrap();
        assert_eq!(s.value_at(0.25), Some(0.75));
        assert_eq!(s.value_at(1.0), Some(0.0));
        assert_eq!(s.value_at(1.2), None);
        assert_eq!(s.value_at(-0.1), None);
        assert_eq!(s.spacing().unwrap(), 0.5);
    }

    #[test]
    fn non_uniform_axis_is_detected() {
        let mut s = Spectrum::acf_from_values(vec![1.0, 0.5, 0.0], 0.5).unwrap();
        s.axis[2] = 1.3;
        assert!(matches!(s.spacing(), Err(Error::NonUniformLags)));
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("acf.csv");
        let s = Spectrum::acf_from_values(vec![1.0, 0.25, -1.0 / 3.0], 1e-4).unwrap();
        s.write_csv(&file).unwrap();
        let back = Spectrum::read_csv(&file, SpectrumKind::Acf, AxisUnits::Reduced).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn si_axes() {
        let units = UnitSystem::new(1.0, 100.0).unwrap();
        let mut s = Spectrum::acf_from_values(vec![1.0, 0.5], 1.0).unwrap();
        assert_eq!(s.to_si(&units).axis, vec![0.0, 0.01]);
        s.kind = SpectrumKind::Psd;
        let si = s.to_si(&units);
        assert_eq!(si.axis, vec![0.0, 100.0]);
        assert_eq!(si.values, vec![0.01, 0.005]);
    }
}

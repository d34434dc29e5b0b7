use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::spectrum::Spectrum;
use crate::error::{Error, Result};

/// Windowed ACF estimator settings, all in samples.
///
/// A window starts at every `window_stride`-th sample and pairs its first
/// value with the values `lag_step, 2 lag_step, ...` samples later, up to
/// `max_lag` or the end of the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcfConfig {
    pub window_stride: usize,
    pub max_lag: usize,
    pub lag_step: usize,
}

impl Default for AcfConfig {
    fn default() -> Self {
        Self { window_stride: 1000, max_lag: 100_000, lag_step: 1 }
    }
}

impl AcfConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_stride == 0 || self.lag_step == 0 {
            return Err(Error::InvalidParameter("window stride and lag step must be >= 1".into()));
        }
        if self.window_stride % self.lag_step != 0 {
            return Err(Error::InvalidParameter(format!(
                "lag step {} must divide the window stride {}",
                self.lag_step, self.window_stride
            )));
        }
        if self.max_lag < self.lag_step {
            return Err(Error::InvalidParameter("max lag must cover at least one lag step".into()));
        }
        Ok(())
    }

    pub fn n_lags(&self) -> usize {
        self.max_lag / self.lag_step + 1
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct LagSums {
    n: f64,
    a: f64,
    b: f64,
    aa: f64,
    bb: f64,
    ab: f64,
}

impl LagSums {
    #[inline]
    fn add(&mut self, a: f64, b: f64) {
        self.n += 1.0;
        self.a += a;
        self.b += b;
        self.aa += a * a;
        self.bb += b * b;
        self.ab += a * b;
    }

    /// Same sums with every sample offset by `d`.
    fn offset(&self, d: f64) -> Self {
        let nd2 = self.n * d * d;
        Self {
            n: self.n,
            a: self.a + self.n * d,
            b: self.b + self.n * d,
            aa: self.aa + 2.0 * d * self.a + nd2,
            bb: self.bb + 2.0 * d * self.b + nd2,
            ab: self.ab + d * (self.a + self.b) + nd2,
        }
    }

    fn merge(&mut self, o: &Self) {
        self.n += o.n;
        self.a += o.a;
        self.b += o.b;
        self.aa += o.aa;
        self.bb += o.bb;
        self.ab += o.ab;
    }

    /// Pearson correlation of the pairs; exactly 1 when `a == b` pairwise.
    fn correlation(&self) -> Option<f64> {
        if self.n < 2.0 {
            return None;
        }
        let (ma, mb) = (self.a / self.n, self.b / self.n);
        let cov = self.ab / self.n - ma * mb;
        let va = self.aa / self.n - ma * ma;
        let vb = self.bb / self.n - mb * mb;
        let denom = (va * vb).sqrt();
        Some(if denom > 0.0 { cov / denom } else { 0.0 })
    }

    fn variance(&self) -> f64 {
        let m = self.a / self.n;
        self.aa / self.n - m * m
    }
}

/// Streaming windowed ACF estimator.
///
/// Keeps only the open window origins, so a path never has to be stored.
/// Accumulators of several paths can be merged before normalizing.
#[derive(Debug, Clone)]
pub struct AcfAccumulator {
    config: AcfConfig,
    shift: Option<f64>,
    index: usize,
    n_windows: usize,
    shortest: usize,
    origins: VecDeque<(usize, f64)>,
    sums: Vec<LagSums>,
}

impl AcfAccumulator {
    pub fn new(config: AcfConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            shift: None,
            index: 0,
            n_windows: 0,
            shortest: usize::MAX,
            origins: VecDeque::new(),
            sums: vec![LagSums::default(); config.n_lags()],
        })
    }

    pub fn config(&self) -> &AcfConfig {
        &self.config
    }

    pub fn n_windows(&self) -> usize {
        self.n_windows
    }

    /// Samples pushed into the current series.
    pub fn len(&self) -> usize {
        self.index
    }

    pub fn is_empty(&self) -> bool {
        self.index == 0 && self.n_windows == 0
    }

    pub fn push(&mut self, value: f64) {
        let c = *self.shift.get_or_insert(value);
        let v = value - c;
        let i = self.index;
        let cfg = self.config;
        if i % cfg.window_stride == 0 {
            self.origins.push_back((i, v));
            self.n_windows += 1;
        }
        if i % cfg.lag_step == 0 {
            while self.origins.front().is_some_and(|&(s, _)| i - s > cfg.max_lag) {
                self.origins.pop_front();
            }
            for &(s, a) in &self.origins {
                self.sums[(i - s) / cfg.lag_step].add(a, v);
            }
        }
        self.index += 1;
    }

    pub fn extend(&mut self, values: impl IntoIterator<Item = f64>) {
        for v in values {
            self.push(v);
        }
    }

    /// Closes the current series; the next `push` starts a new one whose
    /// windows never pair with earlier samples.
    pub fn end_series(&mut self) {
        if self.index > 0 {
            self.shortest = self.shortest.min(self.index);
        }
        self.origins.clear();
        self.index = 0;
    }

    /// Pools another accumulator with the same configuration.
    pub fn merge(&mut self, mut other: AcfAccumulator) -> Result<()> {
        if other.config != self.config {
            return Err(Error::InvalidParameter("cannot merge ACF accumulators with different settings".into()));
        }
        self.end_series();
        other.end_series();
        let d = match (self.shift, other.shift) {
            (_, None) => return Ok(()),
            (None, Some(c)) => {
                self.shift = Some(c);
                0.0
            }
            (Some(c1), Some(c2)) => c2 - c1,
        };
        for (mine, theirs) in self.sums.iter_mut().zip(&other.sums) {
            mine.merge(&theirs.offset(d));
        }
        self.n_windows += other.n_windows;
        self.shortest = self.shortest.min(other.shortest);
        Ok(())
    }

    /// Normalized ACF on lags `k * lag_step * dt`.
    ///
    /// Each lag is normalized by the variances of its own pair sample, which
    /// makes ACF(0) exactly one and bounds every lag by one in magnitude.
    pub fn finish(mut self, dt: f64) -> Result<Spectrum> {
        self.end_series();
        if self.shortest == usize::MAX {
            return Err(Error::EmptySeries);
        }
        if self.shortest < 2 * self.config.window_stride {
            return Err(Error::SeriesTooShort(format!(
                "series of {} samples is shorter than twice the window stride {}",
                self.shortest, self.config.window_stride
            )));
        }
        if !(self.sums[0].variance() > 0.0) {
            return Err(Error::ConstantSeries);
        }
        let values: Vec<f64> = self.sums.iter().map_while(LagSums::correlation).collect();
        let mut acf = Spectrum::acf_from_values(values, dt * self.config.lag_step as f64)?;
        acf.n_windows = self.n_windows;
        Ok(acf)
    }
}

/// Windowed ACF of a single sampled series with sample spacing `dt`.
pub fn autocorrelation(series: &[f64], dt: f64, config: &AcfConfig) -> Result<Spectrum> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("time series"));
    }
    let mut acc = AcfAccumulator::new(*config)?;
    acc.extend(series.iter().copied());
    acc.finish(dt)
}

/// Pair counts per lag, the effective sample size of each ACF value.
pub fn pair_counts(series_len: usize, config: &AcfConfig) -> Vec<usize> {
    (0..config.n_lags())
        .map(|k| {
            let lag = k * config.lag_step;
            if lag >= series_len {
                0
            } else {
                (series_len - 1 - lag) / config.window_stride + 1
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sde::WienerStream;
    use proptest::prelude::*;

    fn white(n: usize, seed: u64) -> Vec<f64> {
        let mut w = WienerStream::new(seed, 0, 1.0).unwrap();
        (0..n).map(|_| w.increment()).collect()
    }

    /// Direct evaluation of the estimator for a small series.
    fn brute_force(series: &[f64], cfg: &AcfConfig) -> Vec<f64> {
        let mut out = Vec::new();
        for k in 0..cfg.n_lags() {
            let lag = k * cfg.lag_step;
            let pairs: Vec<(f64, f64)> = (0..series.len())
                .step_by(cfg.window_stride)
                .filter(|s| s + lag < series.len())
                .map(|s| (series[s], series[s + lag]))
                .collect();
            if pairs.len() < 2 {
                break;
            }
            let n = pairs.len() as f64;
            let ma = pairs.iter().map(|p| p.0).sum::<f64>() / n;
            let mb = pairs.iter().map(|p| p.1).sum::<f64>() / n;
            let cov = pairs.iter().map(|p| (p.0 - ma) * (p.1 - mb)).sum::<f64>() / n;
            let va = pairs.iter().map(|p| (p.0 - ma).powi(2)).sum::<f64>() / n;
            let vb = pairs.iter().map(|p| (p.1 - mb).powi(2)).sum::<f64>() / n;
            out.push(cov / (va * vb).sqrt());
        }
        out
    }

    #[test]
    fn matches_direct_evaluation() {
        let mut series = white(3000, 4);
        for i in 1..series.len() {
            series[i] += 0.8 * series[i - 1] + 5.0;
        }
        let cfg = AcfConfig { window_stride: 10, max_lag: 40, lag_step: 2 };
        let acf = autocorrelation(&series, 0.1, &cfg).unwrap();
        let direct = brute_force(&series, &cfg);
        assert_eq!(acf.len(), direct.len());
        for (a, b) in acf.values.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-10, "{a} {b}");
        }
        assert_eq!(acf.n_windows, 300);
        assert!((acf.axis[3] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn white_noise_is_uncorrelated() {
        let series = white(200_000, 11);
        let cfg = AcfConfig { window_stride: 10, max_lag: 50, lag_step: 1 };
        let acf = autocorrelation(&series, 1.0, &cfg).unwrap();
        let counts = pair_counts(series.len(), &cfg);
        assert_eq!(acf.values[0], 1.0);
        for (r, n) in acf.values.iter().zip(&counts).skip(1) {
            assert!(r.abs() < 3.0 / (*n as f64).sqrt(), "{r} with {n} pairs");
        }
    }

    #[test]
    fn constant_series_is_rejected() {
        let cfg = AcfConfig { window_stride: 2, max_lag: 4, lag_step: 1 };
        assert!(matches!(autocorrelation(&[3.5; 100], 1.0, &cfg), Err(Error::ConstantSeries)));
    }

    #[test]
    fn short_series_is_rejected() {
        let cfg = AcfConfig { window_stride: 1000, max_lag: 10, lag_step: 1 };
        assert!(matches!(autocorrelation(&white(1999, 1), 1.0, &cfg), Err(Error::SeriesTooShort(_))));
        assert!(autocorrelation(&[], 1.0, &cfg).is_err());
    }

    #[test]
    fn lag_step_must_divide_stride() {
        assert!(AcfConfig { window_stride: 10, max_lag: 30, lag_step: 3 }.validate().is_err());
    }

    #[test]
    fn merged_paths_equal_pooled_pairs() {
        let cfg = AcfConfig { window_stride: 5, max_lag: 20, lag_step: 1 };
        let a: Vec<f64> = white(1000, 1).iter().map(|v| v + 100.0).collect();
        let b = white(1200, 2);
        let mut acc_a = AcfAccumulator::new(cfg).unwrap();
        acc_a.extend(a.iter().copied());
        let mut acc_b = AcfAccumulator::new(cfg).unwrap();
        acc_b.extend(b.iter().copied());
        acc_a.merge(acc_b).unwrap();
        let merged = acc_a.finish(1.0).unwrap();

        let mut seq = AcfAccumulator::new(cfg).unwrap();
        seq.extend(a.iter().copied());
        seq.end_series();
        seq.extend(b.iter().copied());
        let sequential = seq.finish(1.0).unwrap();
        assert_eq!(merged.n_windows, sequential.n_windows);
        for (x, y) in merged.values.iter().zip(&sequential.values) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn unit_lag_zero_and_bounded(seed in 0u64..1000, scale in 1e-3f64..1e3, offset in -1e3f64..1e3) {
            let series: Vec<f64> = white(400, seed).iter().map(|v| offset + scale * v).collect();
            let cfg = AcfConfig { window_stride: 4, max_lag: 30, lag_step: 1 };
            let acf = autocorrelation(&series, 0.5, &cfg).unwrap();
            prop_assert_eq!(acf.values[0], 1.0);
            for r in &acf.values {
                prop_assert!(r.abs() <= 1.0 + 1e-12);
            }
        }
    }
}

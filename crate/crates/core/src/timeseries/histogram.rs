use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groundstate::{trapezoid, Density};

/// Equal-width visitation histogram.
///
/// `density` is normalized so that its trapezoid integral over the bin
/// centers is one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub density: Vec<f64>,
}

impl Histogram {
    fn from_counts(edges: Vec<f64>, counts: Vec<u64>) -> Result<Self> {
        let width = edges[1] - edges[0];
        let raw: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        let norm = trapezoid(&raw, width);
        if !(norm > 0.0) {
            // A lone occupied end bin has zero trapezoid weight; fall back to
            // the plain bin-area normalization.
            let total: f64 = raw.iter().sum();
            if total == 0.0 {
                return Err(Error::EmptySeries);
            }
            let density = raw.iter().map(|c| c / (total * width)).collect();
            return Ok(Self { edges, counts, density });
        }
        let density = raw.iter().map(|c| c / norm).collect();
        Ok(Self { edges, counts, density })
    }

    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Trapezoid integral of the density over the bin centers.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.density, self.width())
    }

    /// The density as a tabulated function on the bin centers.
    pub fn to_density(&self) -> Result<Density> {
        Density::new(self.centers(), self.density.clone())
    }
}

/// Histogram with `n_bins` equal bins over `[min, max]` of `series`.
///
/// A series of identical values gets unit-width bins centered on the value.
pub fn histogram(series: &[f64], n_bins: usize) -> Result<Histogram> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    if n_bins < 2 {
        return Err(Error::InvalidParameter("histogram needs at least two bins".into()));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("histogram sample"));
    }
    let lo = series.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if lo == hi { (lo - 0.5, hi + 0.5) } else { (lo, hi) };
    let mut h = StreamingHistogram::new(lo, hi, n_bins)?;
    h.extend(series.iter().copied());
    h.finish()
}

/// Fixed-range histogram filled one sample at a time.
///
/// Samples outside the range are counted separately and left out of the
/// density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamingHistogram {
    lo: f64,
    hi: f64,
    counts: Vec<u64>,
    pub below: u64,
    pub above: u64,
}

impl StreamingHistogram {
    pub fn new(lo: f64, hi: f64, n_bins: usize) -> Result<Self> {
        if n_bins < 2 {
            return Err(Error::InvalidParameter("histogram needs at least two bins".into()));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!("bad histogram range [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi, counts: vec![0; n_bins], below: 0, above: 0 })
    }

    #[inline]
    pub fn push(&mut self, v: f64) {
        let n = self.counts.len();
        if v < self.lo {
            self.below += 1;
        } else if v > self.hi {
            self.above += 1;
        } else {
            let i = ((v - self.lo) / (self.hi - self.lo) * n as f64) as usize;
            self.counts[i.min(n - 1)] += 1;
        }
    }

    pub fn extend(&mut self, values: impl IntoIterator<Item = f64>) {
        for v in values {
            self.push(v);
        }
    }

    pub fn merge(&mut self, other: &StreamingHistogram) -> Result<()> {
        if other.lo != self.lo || other.hi != self.hi || other.counts.len() != self.counts.len() {
            return Err(Error::InvalidParameter("cannot merge histograms with different bins".into()));
        }
        self.counts.iter_mut().zip(&other.counts).for_each(|(a, b)| *a += b);
        self.below += other.below;
        self.above += other.above;
        Ok(())
    }

    pub fn finish(&self) -> Result<Histogram> {
        let n = self.counts.len();
        let edges = (0..=n).map(|i| self.lo + (self.hi - self.lo) * i as f64 / n as f64).collect();
        Histogram::from_counts(edges, self.counts.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sde::WienerStream;

    #[test]
    fn gaussian_samples() {
        let mut w = WienerStream::new(5, 0, 0.5).unwrap();
        let series: Vec<f64> = (0..400_000).map(|_| w.increment()).collect();
        let h = histogram(&series, 200).unwrap();
        assert!((h.integral() - 1.0).abs() < 1e-6);
        let d = h.to_density().unwrap();
        assert!((d.variance() - 0.5).abs() < 0.01, "{}", d.variance());
        assert_eq!(h.total(), 400_000);
    }

    #[test]
    fn identical_values_fill_one_bin() {
        let h = histogram(&[2.0; 10], 5).unwrap();
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert_eq!(h.total(), 10);
        assert!((h.integral() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_and_degenerate_input() {
        assert!(matches!(histogram(&[], 10), Err(Error::EmptySeries)));
        assert!(histogram(&[1.0, 2.0], 1).is_err());
        assert!(StreamingHistogram::new(1.0, 1.0, 4).is_err());
    }

    #[test]
    fn out_of_range_samples_are_tallied() {
        let mut h = StreamingHistogram::new(0.0, 1.0, 4).unwrap();
        h.extend([-1.0, 0.0, 0.3, 1.0, 2.0, 0.99]);
        assert_eq!((h.below, h.above), (1, 1));
        let done = h.finish().unwrap();
        assert_eq!(done.counts, vec![1, 1, 0, 2]);
    }
}

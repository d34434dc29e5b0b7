use rand_distr::{Distribution, StandardNormal};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default seed for all stochastic runs.
pub const DEFAULT_SEED: u64 = 2_168_461;

/// Identifies one reproducible sequence of Wiener increments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamId {
    pub seed: u64,
    pub stream_id: u64,
}

/// Seeded source of i.i.d. `N(0, dt)` increments.
///
/// Backed by PCG64 (XSL-RR 128/64); `stream_id` selects the LCG increment, so
/// streams sharing a seed are independent sequences.
#[derive(Debug, Clone)]
pub struct WienerStream {
    id: StreamId,
    dt: f64,
    sqrt_dt: f64,
    rng: Pcg64,
}

impl WienerStream {
    pub fn new(seed: u64, stream_id: u64, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be > 0, got {dt}")));
        }
        // Spread the 64-bit seed over the 128-bit state.
        let state = (seed as u128) << 64 | (seed ^ 0x9e37_79b9_7f4a_7c15) as u128;
        Ok(Self {
            id: StreamId { seed, stream_id },
            dt,
            sqrt_dt: dt.sqrt(),
            rng: Pcg64::new(state, stream_id as u128),
        })
    }

    pub fn id(&self) -> StreamId {
        self.id
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    #[inline]
    pub fn increment(&mut self) -> f64 {
        let z: f64 = StandardNormal.sample(&mut self.rng);
        z * self.sqrt_dt
    }

    #[inline]
    pub fn increments<const M: usize>(&mut self) -> [f64; M] {
        std::array::from_fn(|_| self.increment())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_streams_repeat() {
        let mut a = WienerStream::new(7, 3, 1e-2).unwrap();
        let mut b = WienerStream::new(7, 3, 1e-2).unwrap();
        for _ in 0..1000 {
            assert_eq!(a.increment().to_bits(), b.increment().to_bits());
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = WienerStream::new(7, 3, 1.0).unwrap();
        let mut b = WienerStream::new(7, 4, 1.0).unwrap();
        let mut c = WienerStream::new(8, 3, 1.0).unwrap();
        let xa: Vec<f64> = (0..8).map(|_| a.increment()).collect();
        let xb: Vec<f64> = (0..8).map(|_| b.increment()).collect();
        let xc: Vec<f64> = (0..8).map(|_| c.increment()).collect();
        assert_ne!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn increment_moments() {
        let dt = 0.25;
        let mut w = WienerStream::new(1, 0, dt).unwrap();
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| w.increment()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        // Standard errors: sqrt(dt/n) ~ 1.1e-3 and dt sqrt(2/n) ~ 7.9e-4.
        assert!(mean.abs() < 4e-3, "{mean}");
        assert!((var - dt).abs() < 4e-3, "{var}");
    }

    #[test]
    fn rejects_bad_dt() {
        assert!(WienerStream::new(1, 0, 0.0).is_err());
        assert!(WienerStream::new(1, 0, f64::NAN).is_err());
    }
}

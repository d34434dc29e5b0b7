//! Autocorrelation, spectral density and visitation statistics of sampled
//! paths.

mod acf;
mod histogram;
mod psd;
mod spectrum;
mod stats;

pub use acf::{autocorrelation, pair_counts, AcfAccumulator, AcfConfig};
pub use histogram::{histogram, Histogram, StreamingHistogram};
pub use psd::{
    add_noise_floor, crossover_frequency, floor_for_crossover, power_spectral_density, psd_with_window, LagWindow,
    PsdEstimate,
};
pub use spectrum::{AxisUnits, Spectrum, SpectrumKind};
pub use stats::{ks_distance, ks_distance_to, RunningMoments};

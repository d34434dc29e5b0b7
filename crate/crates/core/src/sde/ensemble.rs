use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::heun::integrate;
use super::path::{PathEnsemble, PathMetadata, PhasePath};
use super::system::SdeSystem;
use super::wiener::{WienerStream, DEFAULT_SEED};
use crate::error::{Error, Result};

/// Time grid and recording policy shared by every path of an ensemble.
///
/// `n_steps` counts all integration steps, burn-in included. Samples are
/// stored at steps `burn_in, burn_in + record_stride, ...`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub seed: u64,
    pub dt: f64,
    pub n_steps: usize,
    pub burn_in: usize,
    pub record_stride: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, dt: 1e-4, n_steps: 10_000_000, burn_in: 100_000, record_stride: 1 }
    }
}

impl Sampling {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be > 0, got {}", self.dt)));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParameter("record_stride must be >= 1".into()));
        }
        if self.burn_in > self.n_steps {
            return Err(Error::InvalidParameter(format!(
                "burn-in {} exceeds n_steps {}",
                self.burn_in, self.n_steps
            )));
        }
        Ok(())
    }

    /// Number of stored samples per path.
    pub fn n_samples(&self) -> usize {
        (self.n_steps - self.burn_in) / self.record_stride + 1
    }

    pub fn is_recorded(&self, step: usize) -> bool {
        step >= self.burn_in && (step - self.burn_in) % self.record_stride == 0
    }

    fn metadata(&self, system: String, n_paths: usize, initial: Vec<[f64; 2]>) -> PathMetadata {
        PathMetadata {
            seed: self.seed,
            stream_ids: (0..n_paths as u64).collect(),
            dt: self.dt,
            record_stride: self.record_stride,
            n_steps: self.n_steps,
            t0: self.burn_in as f64 * self.dt,
            burn_in: self.burn_in,
            system,
            initial,
        }
    }
}

/// Integrates one path and keeps every state, `n_steps + 1` samples.
pub fn heun_integrate<S, const M: usize>(
    system: &S,
    initial: [f64; 2],
    n_steps: usize,
    stream: &WienerStream,
) -> Result<PathEnsemble>
where
    S: SdeSystem<2, M> + ?Sized,
{
    let id = stream.id();
    let mut stream = stream.clone();
    let mut path = PhasePath::with_capacity(n_steps + 1);
    integrate(system, initial, n_steps, &mut stream, |_, _, s| path.push(s))?;
    let metadata = PathMetadata {
        seed: id.seed,
        stream_ids: vec![id.stream_id],
        dt: stream.dt(),
        record_stride: 1,
        n_steps,
        t0: 0.0,
        burn_in: 0,
        system: system.describe(),
        initial: vec![initial],
    };
    Ok(PathEnsemble { metadata, paths: vec![path] })
}

/// Runs path `index` of an ensemble, feeding each recorded sample to `observe`.
pub fn run_path<S, F, const M: usize>(
    system: &S,
    initial: [f64; 2],
    sampling: &Sampling,
    index: usize,
    mut observe: F,
) -> Result<[f64; 2]>
where
    S: SdeSystem<2, M> + ?Sized,
    F: FnMut(f64, &[f64; 2]),
{
    sampling.validate()?;
    let mut stream = WienerStream::new(sampling.seed, index as u64, sampling.dt)?;
    integrate(system, initial, sampling.n_steps, &mut stream, |k, t, s| {
        if sampling.is_recorded(k) {
            observe(t, s);
        }
    })
}

/// Integrates `n_paths` independent paths, path `i` on Wiener stream `i`.
///
/// Paths run concurrently; the result is in path order and does not depend
/// on scheduling.
pub fn simulate_ensemble<S, I, const M: usize>(
    system: &S,
    initial: I,
    sampling: &Sampling,
    n_paths: usize,
) -> Result<PathEnsemble>
where
    S: SdeSystem<2, M> + ?Sized,
    I: Fn(usize) -> [f64; 2] + Sync,
{
    sampling.validate()?;
    let n = sampling.n_samples();
    let paths = fold_paths(system, &initial, sampling, n_paths, |_| PhasePath::with_capacity(n), |path, _, s| {
        path.push(s)
    })?;
    let initial = (0..n_paths).map(initial).collect();
    Ok(PathEnsemble { metadata: sampling.metadata(system.describe(), n_paths, initial), paths })
}

/// Streams every path through its own accumulator without storing states.
///
/// `init(i)` creates the accumulator of path `i`. Returns the accumulators in
/// path order, so any reduction over them is deterministic.
pub fn fold_paths<S, I, T, Init, Obs, const M: usize>(
    system: &S,
    initial: I,
    sampling: &Sampling,
    n_paths: usize,
    init: Init,
    observe: Obs,
) -> Result<Vec<T>>
where
    S: SdeSystem<2, M> + ?Sized,
    I: Fn(usize) -> [f64; 2] + Sync,
    T: Send,
    Init: Fn(usize) -> T + Sync,
    Obs: Fn(&mut T, f64, &[f64; 2]) + Sync,
{
    let mut all = Vec::with_capacity(n_paths);
    reduce_paths(system, initial, sampling, n_paths, init, observe, |acc| all.push(acc))?;
    Ok(all)
}

/// Like [`fold_paths`], but hands each finished accumulator to `merge` in
/// path order and keeps only a bounded batch alive, so memory does not grow
/// with `n_paths`.
pub fn reduce_paths<S, I, T, Init, Obs, Merge, const M: usize>(
    system: &S,
    initial: I,
    sampling: &Sampling,
    n_paths: usize,
    init: Init,
    observe: Obs,
    mut merge: Merge,
) -> Result<()>
where
    S: SdeSystem<2, M> + ?Sized,
    I: Fn(usize) -> [f64; 2] + Sync,
    T: Send,
    Init: Fn(usize) -> T + Sync,
    Obs: Fn(&mut T, f64, &[f64; 2]) + Sync,
    Merge: FnMut(T),
{
    sampling.validate()?;
    let batch = 4 * rayon::current_num_threads().max(1);
    let mut start = 0;
    while start < n_paths {
        let end = (start + batch).min(n_paths);
        let done: Vec<T> = (start..end)
            .into_par_iter()
            .map(|i| {
                let mut acc = init(i);
                run_path(system, initial(i), sampling, i, |t, s| observe(&mut acc, t, s))?;
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        done.into_iter().for_each(&mut merge);
        start = end;
    }
    Ok(())
}

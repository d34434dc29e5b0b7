use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One sampled phase-space trajectory.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhasePath {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhasePath {
    pub fn with_capacity(n: usize) -> Self {
        Self { x: Vec::with_capacity(n), p: Vec::with_capacity(n) }
    }

    pub fn push(&mut self, s: &[f64; 2]) {
        self.x.push(s[0]);
        self.p.push(s[1]);
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn radius(&self) -> Vec<f64> {
        self.x.iter().zip(&self.p).map(|(x, p)| x.hypot(*p)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathMetadata {
    pub seed: u64,
    /// Wiener stream per path, in path order.
    pub stream_ids: Vec<u64>,
    /// Integration step.
    pub dt: f64,
    /// Integration steps between stored samples.
    pub record_stride: usize,
    pub n_steps: usize,
    /// Time of the first stored sample.
    pub t0: f64,
    /// Steps integrated before the first stored sample.
    pub burn_in: usize,
    pub system: String,
    /// Initial state per path.
    pub initial: Vec<[f64; 2]>,
}

impl PathMetadata {
    /// Spacing of stored samples.
    pub fn sample_interval(&self) -> f64 {
        self.dt * self.record_stride as f64
    }
}

/// Paths sharing one system, step and sampling grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    pub metadata: PathMetadata,
    pub paths: Vec<PhasePath>,
}

impl PathEnsemble {
    pub fn n_paths(&self) -> usize {
        self.paths.len()
    }

    pub fn n_samples(&self) -> usize {
        self.paths.first().map_or(0, PhasePath::len)
    }

    pub fn time(&self, k: usize) -> f64 {
        self.metadata.t0 + k as f64 * self.metadata.sample_interval()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_samples()).map(|k| self.time(k)).collect()
    }

    /// Writes `{prefix}_{i:04}.csv` per path plus `{prefix}.meta.json`.
    pub fn write_csv(&self, dir: impl AsRef<Path>, prefix: &str) -> Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let times = self.times();
        let mut files = Vec::with_capacity(self.paths.len());
        for (i, path) in self.paths.iter().enumerate() {
            let file = dir.join(format!("{prefix}_{i:04}.csv"));
            write_phase_csv(&file, &times, path)?;
            files.push(file);
        }
        let meta = serde_json::to_string_pretty(&self.metadata).map_err(|e| Error::Format(e.to_string()))?;
        fs::write(dir.join(format!("{prefix}.meta.json")), meta + "\n")?;
        Ok(files)
    }

    /// Reads back what [`PathEnsemble::write_csv`] produced.
    pub fn read_csv(dir: impl AsRef<Path>, prefix: &str) -> Result<Self> {
        let dir = dir.as_ref();
        let meta = fs::read_to_string(dir.join(format!("{prefix}.meta.json")))?;
        let metadata: PathMetadata = serde_json::from_str(&meta).map_err(|e| Error::Format(e.to_string()))?;
        let paths = (0..metadata.stream_ids.len())
            .map(|i| read_phase_csv(dir.join(format!("{prefix}_{i:04}.csv"))).map(|(_, path)| path))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { metadata, paths })
    }
}

/// Writes a `t,x,p` CSV with LF line endings.
pub fn write_phase_csv(file: impl AsRef<Path>, times: &[f64], path: &PhasePath) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(file)?);
    out.write_all(b"t,x,p\n")?;
    for ((t, x), p) in times.iter().zip(&path.x).zip(&path.p) {
        writeln!(out, "{t},{x},{p}")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a `t,x,p` CSV.
pub fn read_phase_csv(file: impl AsRef<Path>) -> Result<(Vec<f64>, PhasePath)> {
    let file = file.as_ref();
    let reader = BufReader::new(fs::File::open(file)?);
    let mut lines = reader.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != "t,x,p" {
        return Err(Error::Format(format!("{}: expected header `t,x,p`, got `{header}`", file.display())));
    }
    let mut times = Vec::new();
    let mut path = PhasePath::default();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Format(format!("{}:{}: {e}", file.display(), lineno + 2)))?;
        if fields.len() != 3 {
            return Err(Error::Format(format!("{}:{}: expected 3 columns", file.display(), lineno + 2)));
        }
        times.push(fields[0]);
        path.x.push(fields[1]);
        path.p.push(fields[2]);
    }
    Ok((times, path))
}

/// Centered moving average over `window` samples of every path component.
///
/// The output has `n_samples - window + 1` samples; sample `j` averages input
/// samples `j..j + window` and is stamped at their mid time.
pub fn moving_average(ensemble: &PathEnsemble, window: usize) -> Result<PathEnsemble> {
    let n = ensemble.n_samples();
    if window == 0 {
        return Err(Error::InvalidParameter("moving-average window must be >= 1".into()));
    }
    if window > n {
        return Err(Error::SeriesTooShort(format!("window {window} exceeds series length {n}")));
    }
    let mut metadata = ensemble.metadata.clone();
    metadata.t0 += 0.5 * (window - 1) as f64 * metadata.sample_interval();
    let paths = ensemble
        .paths
        .iter()
        .map(|path| PhasePath { x: window_mean(&path.x, window), p: window_mean(&path.p, window) })
        .collect();
    Ok(PathEnsemble { metadata, paths })
}

fn window_mean(series: &[f64], window: usize) -> Vec<f64> {
    if window == 1 {
        return series.to_vec();
    }
    let mut prefix = Vec::with_capacity(series.len() + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for v in series {
        acc += v;
        prefix.push(acc);
    }
    let w = window as f64;
    (0..=series.len() - window).map(|j| (prefix[j + window] - prefix[j]) / w).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ensemble(x: Vec<f64>, p: Vec<f64>) -> PathEnsemble {
        PathEnsemble {
            metadata: PathMetadata {
                seed: 1,
                stream_ids: vec![0],
                dt: 0.1,
                record_stride: 1,
                n_steps: x.len() - 1,
                t0: 0.0,
                burn_in: 0,
                system: "test".into(),
                initial: vec![[x[0], p[0]]],
            },
            paths: vec![PhasePath { x, p }],
        }
    }

    #[test]
    fn window_one_is_identity() {
        let e = ensemble(vec![1.0, 2.0, 5.0], vec![0.0, -1.0, 3.0]);
        assert_eq!(moving_average(&e, 1).unwrap(), e);
    }

    #[test]
    fn constant_path_stays_constant() {
        let e = ensemble(vec![0.7; 50], vec![-1.3; 50]);
        let m = moving_average(&e, 7).unwrap();
        assert_eq!(m.n_samples(), 44);
        for (x, p) in m.paths[0].x.iter().zip(&m.paths[0].p) {
            assert!((x - 0.7).abs() < 1e-14 && (p + 1.3).abs() < 1e-14);
        }
        assert!((m.time(0) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn centered_average_values() {
        let e = ensemble(vec![0.0, 1.0, 2.0, 3.0, 10.0], vec![0.0; 5]);
        let m = moving_average(&e, 3).unwrap();
        assert_eq!(m.paths[0].x, vec![1.0, 2.0, 5.0]);
    }

    #[test]
    fn oversized_window_is_rejected() {
        let e = ensemble(vec![0.0; 4], vec![0.0; 4]);
        assert!(matches!(moving_average(&e, 5), Err(Error::SeriesTooShort(_))));
        assert!(moving_average(&e, 0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let e = ensemble(vec![0.1, -2.5e-7, 3.0], vec![1.0 / 3.0, 0.0, -4.25]);
        e.write_csv(dir.path(), "run").unwrap();
        let text = fs::read_to_string(dir.path().join("run_0000.csv")).unwrap();
        assert!(text.starts_with("t,x,p\n") && !text.contains('\r'));
        assert_eq!(PathEnsemble::read_csv(dir.path(), "run").unwrap(), e);
    }

    #[test]
    fn bad_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("bad.csv");
        fs::write(&file, "time,x\n0,1\n").unwrap();
        assert!(matches!(read_phase_csv(&file), Err(Error::Format(_))));
    }
}

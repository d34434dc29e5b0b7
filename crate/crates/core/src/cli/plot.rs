use std::path::{Path, PathBuf};

use super::run::names;
use super::table::{read_table, write_table};
use crate::error::{Error, Result};
use crate::groundstate::GroundStateSolution;
use crate::potential::{Potential, PotentialKind, TrapPotential};
use crate::timeseries::{AxisUnits, Spectrum, SpectrumKind};
use crate::units::UnitSystem;

/// One plot-ready CSV per figure of the original study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    Potentials,
    U,
    Density,
    Acf,
    Psd,
    Coherent,
    Cooling,
}

impl Figure {
    pub const ALL: [Figure; 7] =
        [Figure::Potentials, Figure::U, Figure::Density, Figure::Acf, Figure::Psd, Figure::Coherent, Figure::Cooling];

    pub fn file_name(self) -> &'static str {
        match self {
            Figure::Potentials => "fig_potentials.csv",
            Figure::U => "fig_u.csv",
            Figure::Density => "fig_density.csv",
            Figure::Acf => "fig_acf.csv",
            Figure::Psd => "fig_psd.csv",
            Figure::Coherent => "fig_coherent.csv",
            Figure::Cooling => "fig_cooling.csv",
        }
    }
}

#[derive(Debug)]
pub struct PlotReport {
    pub written: Vec<PathBuf>,
    /// Figures left out because their inputs are missing.
    pub skipped: Vec<(Figure, Error)>,
}

/// Writes plot data for `figures` into `dir`, reading the run artifacts
/// found there. With `None`, every figure whose inputs exist is written and
/// the rest are reported as skipped; an explicitly requested figure with
/// missing inputs is an error.
pub fn emit_plot_data(dir: &Path, figures: Option<&[Figure]>) -> Result<PlotReport> {
    if !dir.is_dir() {
        return Err(Error::MissingArtifact { file: dir.display().to_string(), scenario: "any" });
    }
    let mut report = PlotReport { written: Vec::new(), skipped: Vec::new() };
    for &fig in figures.unwrap_or(&Figure::ALL) {
        let target = dir.join(fig.file_name());
        let outcome = match fig {
            Figure::Potentials => potentials(&target),
            Figure::U => field(dir, &target),
            Figure::Density => density(dir, &target),
            Figure::Acf => acf(dir, &target),
            Figure::Psd => psd(dir, &target),
            Figure::Coherent => phase(dir, "coherent", &target),
            Figure::Cooling => phase(dir, "cool", &target),
        };
        match outcome {
            Ok(()) => report.written.push(target),
            Err(e @ Error::MissingArtifact { .. }) if figures.is_none() => report.skipped.push((fig, e)),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

fn potentials(target: &Path) -> Result<()> {
    let x = axis(-5.0, 5.0, 0.01);
    let mut headers = names(&["x"]);
    let mut cols = vec![x.clone()];
    for kind in PotentialKind::ALL {
        let pot = Potential::reduced(kind);
        headers.push(kind.name().into());
        cols.push(x.iter().map(|&x| pot.value(x)).collect());
    }
    write_table(target, &headers, &cols)
}

fn solutions(dir: &Path) -> Result<Vec<(PotentialKind, GroundStateSolution)>> {
    let found: Vec<_> = PotentialKind::ALL
        .into_iter()
        .filter_map(|k| {
            let f = dir.join(format!("solution_{}.json", k.name()));
            f.exists().then(|| GroundStateSolution::load(&f).map(|s| (k, s)))
        })
        .collect::<Result<_>>()?;
    if found.is_empty() {
        return Err(Error::MissingArtifact { file: "solution_<kind>.json".into(), scenario: "ground-state" });
    }
    Ok(found)
}

fn field(dir: &Path, target: &Path) -> Result<()> {
    let x = axis(-5.0, 5.0, 0.01);
    let mut headers = names(&["x"]);
    let mut cols = vec![x.clone()];
    for (kind, sol) in solutions(dir)? {
        headers.push(format!("u_{}", kind.name()));
        cols.push(x.iter().map(|&x| sol.u0.value(x)).collect());
    }
    headers.push("minus_x".into());
    cols.push(x.iter().map(|x| -x).collect());
    write_table(target, &headers, &cols)
}

fn density(dir: &Path, target: &Path) -> Result<()> {
    let x = axis(-5.0, 5.0, 0.01);
    let mut headers = names(&["x"]);
    let mut cols = vec![x.clone()];
    for (kind, sol) in solutions(dir)? {
        let rho = sol.density();
        headers.push(format!("rho_{}", kind.name()));
        cols.push(x.iter().map(|&x| rho.at(x)).collect());
        let sampled = dir.join(format!("density_{}.csv", kind.name()));
        if sampled.exists() {
            let (_, c) = read_table(&sampled)?;
            headers.push(format!("rho_{}_sampled", kind.name()));
            cols.push(x.iter().map(|&x| interpolate(&c[0], &c[1], x)).collect());
        }
    }
    write_table(target, &headers, &cols)
}

/// Spectra of every kind present, converted back to reduced units.
fn spectra(dir: &Path, stem: &str) -> Result<(Vec<(PotentialKind, Spectrum)>, UnitSystem)> {
    let kind = if stem == "acf" { SpectrumKind::Acf } else { SpectrumKind::Psd };
    let mut found = Vec::new();
    let mut units = UnitSystem::default();
    for k in PotentialKind::ALL {
        let file = dir.join(format!("{stem}_{}.csv", k.name()));
        if !file.exists() {
            continue;
        }
        let meta_file = dir.join(format!("spectra_{}.json", k.name()));
        let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&meta_file)?)
            .map_err(|e| Error::Format(format!("{}: {e}", meta_file.display())))?;
        units = serde_json::from_value(meta["unit_system"].clone()).map_err(|e| Error::Format(e.to_string()))?;
        let si = meta["axis_units"] == "si";
        let mut s = Spectrum::read_csv(&file, kind, if si { AxisUnits::Si } else { AxisUnits::Reduced })?;
        if si {
            let t0 = units.time();
            match kind {
                SpectrumKind::Acf => s.axis.iter_mut().for_each(|a| *a /= t0),
                SpectrumKind::Psd => {
                    s.axis.iter_mut().for_each(|f| *f *= t0);
                    s.values.iter_mut().for_each(|v| *v /= t0);
                }
            }
            s.units = AxisUnits::Reduced;
        }
        found.push((k, s));
    }
    if found.is_empty() {
        return Err(Error::MissingArtifact { file: format!("{stem}_<kind>.csv"), scenario: "analyze" });
    }
    Ok((found, units))
}

fn on_axis(axis: &[f64], s: &Spectrum) -> Vec<f64> {
    axis.iter().map(|&a| s.value_at(a).unwrap_or(f64::NAN)).collect()
}

fn acf(dir: &Path, target: &Path) -> Result<()> {
    let (found, _) = spectra(dir, "acf")?;
    let tau = found[0].1.axis.clone();
    let mut headers = names(&["tau", "exp_ref"]);
    let mut cols = vec![tau.clone(), tau.iter().map(|t| (-t).exp()).collect()];
    for (kind, s) in &found {
        headers.push(format!("acf_{}", kind.name()));
        cols.push(on_axis(&tau, s));
    }
    write_table(target, &headers, &cols)
}

fn psd(dir: &Path, target: &Path) -> Result<()> {
    let (found, units) = spectra(dir, "psd")?;
    let f = found[0].1.axis.clone();
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut headers = names(&["f_reduced", "f_hz", "lorentzian_ref"]);
    let mut cols = vec![
        f.clone(),
        f.iter().map(|f| f * units.frequency()).collect(),
        f.iter().map(|f| 2.0 / (1.0 + (two_pi * f).powi(2))).collect(),
    ];
    for (kind, s) in &found {
        headers.push(format!("psd_{}", kind.name()));
        cols.push(on_axis(&f, s));
    }
    if let Ok((noisy, _)) = spectra(dir, "psd_noise") {
        for (kind, s) in &noisy {
            headers.push(format!("psd_noise_{}", kind.name()));
            cols.push(on_axis(&f, s));
        }
    }
    write_table(target, &headers, &cols)
}

fn phase(dir: &Path, scenario: &'static str, target: &Path) -> Result<()> {
    let raw_file = dir.join(format!("phase_{scenario}_raw.csv"));
    let smooth_file = dir.join(format!("phase_{scenario}.csv"));
    for f in [&raw_file, &smooth_file] {
        if !f.exists() {
            return Err(Error::MissingArtifact { file: f.display().to_string(), scenario });
        }
    }
    let (_, raw) = read_table(&raw_file)?;
    let (_, smooth) = read_table(&smooth_file)?;
    let t = &raw[0];
    let cols = vec![
        t.clone(),
        raw[1].clone(),
        raw[2].clone(),
        raw[3].clone(),
        raw[4].clone(),
        t.iter().map(|&t| interpolate(&smooth[0], &smooth[1], t)).collect(),
        t.iter().map(|&t| interpolate(&smooth[0], &smooth[2], t)).collect(),
    ];
    write_table(target, &names(&["t", "x_raw", "p_raw", "x_cl", "p_cl", "x_smooth", "p_smooth"]), &cols)
}

/// Linear interpolation on an increasing grid; NaN outside it.
fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|&v| v < x);
    if i == xs.len() || (i == 0 && x < xs[0]) {
        return f64::NAN;
    }
    if i == 0 || xs[i] == x {
        return ys[i];
    }
    let w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    ys[i - 1] * (1.0 - w) + ys[i] * w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_edges() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.0, 10.0, 20.0];
        assert_eq!(interpolate(&xs, &ys, 0.0), 0.0);
        assert_eq!(interpolate(&xs, &ys, 1.5), 15.0);
        assert_eq!(interpolate(&xs, &ys, 2.0), 20.0);
        assert!(interpolate(&xs, &ys, 2.1).is_nan());
        assert!(interpolate(&xs, &ys, -0.1).is_nan());
    }

    #[test]
    fn missing_inputs_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let report = emit_plot_data(dir.path(), None).unwrap();
        assert_eq!(report.written.len(), 1);
        assert_eq!(report.skipped.len(), 6);
        let err = emit_plot_data(dir.path(), Some(&[Figure::Acf])).unwrap_err();
        assert!(err.to_string().contains("analyze"), "{err}");
    }
}

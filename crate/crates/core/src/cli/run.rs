use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;
use toml::{Table, Value};

use super::config::{RunConfig, Scenario};
use super::table::write_table;
use crate::error::{Error, Result};
use crate::groundstate::{schrodinger_fd_oracle, solve_ground_state, GroundStateSolution};
use crate::potential::TrapPotential;
use crate::sde::{
    coherent_system, cooling_trajectory, ground_state_system, moving_average, reduce_paths, simulate_ensemble,
    ClassicalTrajectory, PathEnsemble, PathMetadata, PhasePath, SdeSystem,
};
use crate::timeseries::{
    add_noise_floor, crossover_frequency, psd_with_window, AcfAccumulator, RunningMoments, Spectrum,
    StreamingHistogram,
};

/// Files written by a run and the numbers recorded in its manifest.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: Scenario,
    pub manifest: PathBuf,
    pub files: Vec<PathBuf>,
    pub results: Table,
}

/// Executes `config.scenario`, writing every artifact into `out`.
pub fn run(config: &RunConfig, out: &Path) -> Result<RunReport> {
    config.validate()?;
    config.seed()?;
    fs::create_dir_all(out)?;
    let mut ctx = Context { config, out, files: Vec::new(), results: Table::new() };
    match config.scenario {
        Scenario::Oracle => ctx.oracle()?,
        Scenario::GroundState => {
            ctx.ground_state()?;
        }
        Scenario::Sample => ctx.sample(false)?,
        Scenario::Analyze => ctx.sample(true)?,
        Scenario::Coherent => ctx.orbit(false)?,
        Scenario::Cool => ctx.orbit(true)?,
    }
    let manifest = out.join(format!("manifest_{}.toml", ctx.tag()));
    let mut record = config.clone();
    record.results = Some(ctx.results.clone());
    let mut provenance = Table::new();
    provenance.insert("package".into(), Value::String(env!("CARGO_PKG_NAME").into()));
    provenance.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
    record.provenance = Some(provenance);
    fs::write(&manifest, record.to_toml()?)?;
    Ok(RunReport { scenario: config.scenario, manifest, files: ctx.files, results: ctx.results })
}

struct Context<'a> {
    config: &'a RunConfig,
    out: &'a Path,
    files: Vec<PathBuf>,
    results: Table,
}

impl Context<'_> {
    fn tag(&self) -> String {
        let sc = self.config.scenario;
        if sc.uses_potential() {
            format!("{}_{}", sc.name(), self.config.potential.kind)
        } else {
            sc.name().to_string()
        }
    }

    fn kind(&self) -> &'static str {
        self.config.potential.kind.name()
    }

    fn put(&mut self, key: &str, v: f64) {
        self.results.insert(key.into(), Value::Float(v));
    }

    fn put_int(&mut self, key: &str, v: usize) {
        self.results.insert(key.into(), Value::Integer(v as i64));
    }

    fn file(&mut self, name: String) -> PathBuf {
        let path = self.out.join(name);
        self.files.push(path.clone());
        path
    }

    fn oracle(&mut self) -> Result<()> {
        let pot = self.config.potential();
        let grid = self.config.oracle_grid()?;
        let sol = schrodinger_fd_oracle(&pot, &grid)?;
        let path = self.file(format!("oracle_{}.csv", self.kind()));
        let x = grid.points();
        let v: Vec<f64> = x.iter().map(|&x| pot.value(x)).collect();
        write_table(
            &path,
            &names(&["x", "psi", "rho", "u", "potential"]),
            &[x, sol.psi.clone(), sol.density(), sol.u.clone(), v],
        )?;
        self.put("energy", sol.energy);
        self.put_int("grid_points", grid.n_points);
        Ok(())
    }

    fn ground_state(&mut self) -> Result<GroundStateSolution> {
        let path = self.file(format!("solution_{}.json", self.kind()));
        let sol = match solve_ground_state(&self.config.potential(), &self.config.solver_config()?) {
            Ok(sol) => sol,
            Err(Error::NotConverged { iterations, best_energy, best }) => {
                best.save(&path)?;
                return Err(Error::NotConverged { iterations, best_energy, best });
            }
            Err(e) => return Err(e),
        };
        sol.save(&path)?;
        self.put("energy", sol.energy);
        self.put("sigma_x", sol.sigma_x);
        self.put("sigma_p", sol.sigma_p);
        self.put("uncertainty_product", sol.uncertainty_product);
        self.put_int("iterations", sol.generations);
        self.put_int("evaluations", sol.evaluations);
        Ok(sol)
    }

    fn sample(&mut self, analyze: bool) -> Result<()> {
        let sol = self.ground_state()?;
        let solver_results = std::mem::take(&mut self.results);
        for (k, v) in solver_results {
            self.results.insert(format!("solver_{k}"), v);
        }
        let cfg = self.config;
        let sampling = cfg.sampling()?;
        let system = ground_state_system(sol.u0.clone());
        let half = cfg.analysis.histogram_half_width;
        let bins = cfg.analysis.histogram_bins;
        let acf_config = cfg.acf_config();
        let stride = cfg.output.path_stride;
        let export = cfg.output.export_paths.min(cfg.sampling.n_paths);

        let new_stats = |i: usize| -> PathStats {
            PathStats {
                x: RunningMoments::new(),
                p: RunningMoments::new(),
                hist_x: StreamingHistogram::new(-half, half, bins).expect("validated range"),
                hist_p: StreamingHistogram::new(-half, half, bins).expect("validated range"),
                acf: analyze.then(|| AcfAccumulator::new(acf_config).expect("validated ACF settings")),
                path: (i < export).then(PhasePath::default),
                stride,
                count: 0,
            }
        };
        let mut total = new_stats(usize::MAX);
        let mut exported = Vec::new();
        reduce_paths(
            &system,
            |_| [0.0, 0.0],
            &sampling,
            cfg.sampling.n_paths,
            new_stats,
            |acc, _, s| acc.push(s),
            |mut acc| {
                if let Some(path) = acc.path.take() {
                    exported.push(path);
                }
                total.merge(acc);
            },
        )?;

        if !exported.is_empty() {
            let n = exported.len();
            let ensemble = PathEnsemble {
                metadata: PathMetadata {
                    seed: sampling.seed,
                    stream_ids: (0..n as u64).collect(),
                    dt: sampling.dt,
                    record_stride: stride,
                    n_steps: sampling.n_steps,
                    t0: sampling.burn_in as f64 * sampling.dt,
                    burn_in: sampling.burn_in,
                    system: system.describe(),
                    initial: vec![[0.0, 0.0]; n],
                },
                paths: exported,
            };
            let files = ensemble.write_csv(self.out.join("paths"), self.kind())?;
            self.files.extend(files);
        }

        let hx = total.hist_x.finish()?;
        let hp = total.hist_p.finish()?;
        let rho0 = sol.density();
        let centers = hx.centers();
        let reference: Vec<f64> = centers.iter().map(|&x| rho0.at(x)).collect();
        let path = self.file(format!("density_{}.csv", self.kind()));
        write_table(
            &path,
            &names(&["x", "rho_x_sampled", "rho_p_sampled", "rho0"]),
            &[centers, hx.density.clone(), hp.density.clone(), reference],
        )?;
        let (sx, sp) = (total.x.std_dev(), total.p.std_dev());
        self.put("mean_x", total.x.mean());
        self.put("mean_p", total.p.mean());
        self.put("sigma_x", sx);
        self.put("sigma_p", sp);
        self.put("uncertainty_product", sx * sp);
        self.put("density_l2_error", hx.to_density()?.l2_distance(&rho0));
        self.put_int("samples", total.x.count() as usize);

        if let Some(acf) = total.acf.take() {
            self.spectra(acf.finish(sampling.dt)?)?;
        }
        Ok(())
    }

    fn spectra(&mut self, acf: Spectrum) -> Result<()> {
        let cfg = self.config;
        let units = cfg.units;
        let est = psd_with_window(&acf, cfg.analysis.lag_window)?;
        let psd = est.psd;
        let parseval = psd.parseval_integral()?;
        let kind = self.kind();
        let export = |s: &Spectrum| if cfg.output.si { s.to_si(&units) } else { s.clone() };
        let acf_path = self.file(format!("acf_{kind}.csv"));
        export(&acf).write_csv(&acf_path)?;
        let psd_path = self.file(format!("psd_{kind}.csv"));
        export(&psd).write_csv(&psd_path)?;

        let mut noise = serde_json::Value::Null;
        if let Some(level) = cfg.analysis.noise_level {
            let noisy = add_noise_floor(&psd, level)?;
            let path = self.file(format!("psd_noise_{kind}.csv"));
            export(&noisy).write_csv(&path)?;
            let cross = crossover_frequency(&noisy, level);
            noise = json!({
                "level": level,
                "crossover_frequency": cross,
                "crossover_frequency_hz": cross.map(|f| f * units.frequency()),
            });
            if let Some(f) = cross {
                self.put("crossover_frequency", f);
            }
        }
        let meta = json!({
            "axis_units": if cfg.output.si { "si" } else { "reduced" },
            "unit_system": units,
            "acf": {
                "normalization": "per-lag Pearson correlation, ACF(0) = 1",
                "lag_spacing": acf.spacing()?,
                "n_lags": acf.len(),
                "n_windows": acf.n_windows,
                "window_stride": cfg.analysis.window_stride,
                "max_lag": cfg.analysis.max_lag,
                "lag_step": cfg.analysis.lag_step,
            },
            "psd": {
                "normalization": "S(f) = int r(tau) cos(2 pi f tau) dtau over [-T, T]; df (S_0 + 2 sum S_k + S_L) = ACF(0)",
                "lag_window": cfg.analysis.lag_window,
                "frequency_spacing": psd.spacing()?,
                "parseval_integral": parseval,
                "imag_residue": est.imag_residue,
                "clipped_bins": est.clipped_bins,
            },
            "noise": noise,
        });
        let path = self.file(format!("spectra_{kind}.json"));
        fs::write(&path, serde_json::to_string_pretty(&meta).map_err(|e| Error::Format(e.to_string()))? + "\n")?;
        if let Some(r1) = acf.value_at(1.0) {
            self.put("acf_at_1", r1);
        }
        if let Some(s5) = psd.value_at(5.0) {
            self.put("psd_at_5", s5);
        }
        self.put("parseval_integral", parseval);
        self.put_int("acf_windows", acf.n_windows);
        Ok(())
    }

    fn orbit(&mut self, damped: bool) -> Result<()> {
        let cfg = self.config;
        let o = cfg.orbit;
        let traj = if damped {
            let td = o.damping_time_s / cfg.units.time();
            self.put("damping_time_reduced", td);
            cooling_trajectory(o.amplitude, td)?
        } else {
            ClassicalTrajectory::conservative(o.amplitude)
        };
        let system = coherent_system(traj);
        let sampling = cfg.orbit_sampling()?;
        let start = traj.at(0.0);
        let initial = [start.x, start.p];
        let name = cfg.scenario.name();
        let stride = cfg.output.path_stride;

        let single = simulate_ensemble(&system, |_| initial, &sampling, 1)?;
        let times = single.times();
        let raw = &single.paths[0];
        let cl: Vec<_> = times.iter().map(|&t| traj.at(t)).collect();
        let pick = |v: &[f64]| v.iter().step_by(stride).copied().collect::<Vec<f64>>();
        let path = self.file(format!("phase_{name}_raw.csv"));
        write_table(
            &path,
            &names(&["t", "x", "p", "x_cl", "p_cl"]),
            &[
                pick(&times),
                pick(&raw.x),
                pick(&raw.p),
                pick(&cl.iter().map(|c| c.x).collect::<Vec<_>>()),
                pick(&cl.iter().map(|c| c.p).collect::<Vec<_>>()),
            ],
        )?;
        let smooth = moving_average(&single, cfg.analysis.smoothing_window)?;
        let sp = &smooth.paths[0];
        let path = self.file(format!("phase_{name}.csv"));
        write_table(&path, &names(&["t", "x", "p"]), &[pick(&smooth.times()), pick(&sp.x), pick(&sp.p)])?;

        // Spread about the classical orbit, raw and smoothed.
        let spread = |e: &PathEnsemble| -> f64 {
            let path = &e.paths[0];
            let m: RunningMoments = (0..path.len())
                .map(|k| {
                    let c = traj.at(e.time(k));
                    (path.x[k] - c.x).hypot(path.p[k] - c.p)
                })
                .collect();
            m.std_dev()
        };
        let radial = |e: &PathEnsemble| -> f64 { e.paths[0].radius().into_iter().collect::<RunningMoments>().std_dev() };
        self.put("radial_std_raw", radial(&single));
        self.put("radial_std_smoothed", radial(&smooth));
        self.put("orbit_deviation_std_raw", spread(&single));
        self.put("orbit_deviation_std_smoothed", spread(&smooth));

        let t_terminal = 0.5 * o.duration;
        let terminal_smoothed: RunningMoments =
            (0..sp.len()).filter(|&k| smooth.time(k) >= t_terminal).map(|k| sp.x[k].hypot(sp.p[k])).collect();
        self.put("terminal_radius_smoothed", terminal_smoothed.mean());

        let n_rec = times.len().div_ceil(stride);
        let new_stats = |_| OrbitStats::new(n_rec, stride, t_terminal);
        let mut total = new_stats(0);
        reduce_paths(
            &system,
            |_| initial,
            &sampling,
            cfg.sampling.n_paths,
            new_stats,
            |acc, t, s| acc.push(t, s),
            |acc| total.merge(&acc),
        )?;
        let n = cfg.sampling.n_paths as f64;
        let mean = |s: &[f64]| s.iter().map(|v| v / n).collect::<Vec<_>>();
        let se = |s: &[f64], ss: &[f64]| {
            s.iter()
                .zip(ss)
                .map(|(a, b)| if n > 1.0 { ((b / n - (a / n).powi(2)) * n / (n - 1.0) / n).max(0.0).sqrt() } else { f64::NAN })
                .collect::<Vec<_>>()
        };
        let t_rec = pick(&times);
        let path = self.file(format!("ensemble_{name}.csv"));
        write_table(
            &path,
            &names(&["t", "mean_x", "se_x", "mean_p", "se_p", "x_cl", "p_cl"]),
            &[
                t_rec.clone(),
                mean(&total.sx),
                se(&total.sx, &total.sxx),
                mean(&total.sp),
                se(&total.sp, &total.spp),
                t_rec.iter().map(|&t| traj.at(t).x).collect(),
                t_rec.iter().map(|&t| traj.at(t).p).collect(),
            ],
        )?;
        self.put("terminal_radius_sq", total.terminal.mean());
        self.put_int("paths", cfg.sampling.n_paths);
        Ok(())
    }
}

struct PathStats {
    x: RunningMoments,
    p: RunningMoments,
    hist_x: StreamingHistogram,
    hist_p: StreamingHistogram,
    acf: Option<AcfAccumulator>,
    path: Option<PhasePath>,
    stride: usize,
    count: usize,
}

impl PathStats {
    #[inline]
    fn push(&mut self, s: &[f64; 2]) {
        self.x.push(s[0]);
        self.p.push(s[1]);
        self.hist_x.push(s[0]);
        self.hist_p.push(s[1]);
        if let Some(acf) = &mut self.acf {
            acf.push(s[0]);
        }
        if let Some(path) = &mut self.path {
            if self.count % self.stride == 0 {
                path.push(s);
            }
        }
        self.count += 1;
    }

    fn merge(&mut self, other: PathStats) {
        self.x.merge(&other.x);
        self.p.merge(&other.p);
        self.hist_x.merge(&other.hist_x).expect("same bins");
        self.hist_p.merge(&other.hist_p).expect("same bins");
        if let (Some(mine), Some(theirs)) = (&mut self.acf, other.acf) {
            mine.merge(theirs).expect("same ACF settings");
        }
    }
}

/// Per-time ensemble sums on the decimated grid plus terminal statistics.
struct OrbitStats {
    sx: Vec<f64>,
    sxx: Vec<f64>,
    sp: Vec<f64>,
    spp: Vec<f64>,
    stride: usize,
    count: usize,
    t_terminal: f64,
    terminal: RunningMoments,
}

impl OrbitStats {
    fn new(n: usize, stride: usize, t_terminal: f64) -> Self {
        Self {
            sx: vec![0.0; n],
            sxx: vec![0.0; n],
            sp: vec![0.0; n],
            spp: vec![0.0; n],
            stride,
            count: 0,
            t_terminal,
            terminal: RunningMoments::new(),
        }
    }

    #[inline]
    fn push(&mut self, t: f64, s: &[f64; 2]) {
        if self.count % self.stride == 0 {
            let k = self.count / self.stride;
            self.sx[k] += s[0];
            self.sxx[k] += s[0] * s[0];
            self.sp[k] += s[1];
            self.spp[k] += s[1] * s[1];
        }
        if t >= self.t_terminal {
            self.terminal.push(s[0] * s[0] + s[1] * s[1]);
        }
        self.count += 1;
    }

    fn merge(&mut self, o: &OrbitStats) {
        for (a, b) in [(&mut self.sx, &o.sx), (&mut self.sxx, &o.sxx), (&mut self.sp, &o.sp), (&mut self.spp, &o.spp)] {
            a.iter_mut().zip(b).for_each(|(a, b)| *a += b);
        }
        self.terminal.merge(&o.terminal);
    }
}

pub(crate) fn names(headers: &[&str]) -> Vec<String> {
    headers.iter().map(|h| h.to_string()).collect()
}

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groundstate::optimizer::EvolutionConfig;
use crate::groundstate::{Grid, OddSplineParametrization, SolverConfig};
use crate::potential::{Potential, PotentialKind};
use crate::sde::Sampling;
use crate::timeseries::{AcfConfig, LagWindow};
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    #[default]
    GroundState,
    Sample,
    Analyze,
    Coherent,
    Cool,
    Oracle,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::GroundState => "ground-state",
            Scenario::Sample => "sample",
            Scenario::Analyze => "analyze",
            Scenario::Coherent => "coherent",
            Scenario::Cool => "cool",
            Scenario::Oracle => "oracle",
        }
    }

    /// Whether the scenario depends on the trap potential.
    pub fn uses_potential(self) -> bool {
        !matches!(self, Scenario::Coherent | Scenario::Cool)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Scenario::GroundState,
            Scenario::Sample,
            Scenario::Analyze,
            Scenario::Coherent,
            Scenario::Cool,
            Scenario::Oracle,
        ]
        .into_iter()
        .find(|sc| sc.name() == s.trim())
        .ok_or_else(|| Error::Config(format!("unknown scenario `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PotentialSettings {
    pub kind: PotentialKind,
    pub v0: f64,
    pub x0_sq: f64,
}

impl Default for PotentialSettings {
    fn default() -> Self {
        Self { kind: PotentialKind::Harmonic, v0: 1.0, x0_sq: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub grid_half_width: f64,
    pub grid_points: usize,
    pub knot_spacing: f64,
    pub n_knots: usize,
    pub sigma0: f64,
    pub tol_energy: f64,
    pub patience: usize,
    pub max_iterations: usize,
    pub oracle_half_width: f64,
    pub oracle_spacing: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        let evo = EvolutionConfig::default();
        let grid = Grid::default();
        let param = OddSplineParametrization::default();
        Self {
            grid_half_width: grid.x_max,
            grid_points: grid.n_points,
            knot_spacing: param.spacing,
            n_knots: param.n_knots,
            sigma0: evo.sigma0,
            tol_energy: evo.tol,
            patience: evo.patience,
            max_iterations: evo.max_generations,
            oracle_half_width: 10.0,
            oracle_spacing: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingSettings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub dt: f64,
    pub n_steps: usize,
    pub n_paths: usize,
    pub burn_in: usize,
}

impl Default for SamplingSettings {
    fn default() -> Self {
        let s = Sampling::default();
        Self { seed: None, dt: s.dt, n_steps: s.n_steps, n_paths: 1, burn_in: s.burn_in }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSettings {
    pub window_stride: usize,
    pub max_lag: usize,
    pub lag_step: usize,
    pub lag_window: LagWindow,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_level: Option<f64>,
    pub histogram_bins: usize,
    pub histogram_half_width: f64,
    pub smoothing_window: usize,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        let acf = AcfConfig::default();
        Self {
            window_stride: acf.window_stride,
            max_lag: acf.max_lag,
            lag_step: acf.lag_step,
            lag_window: LagWindow::Rectangular,
            noise_level: None,
            histogram_bins: 240,
            histogram_half_width: 6.0,
            smoothing_window: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitSettings {
    pub amplitude: f64,
    pub damping_time_s: f64,
    /// Simulated time in reduced units.
    pub duration: f64,
}

impl Default for OrbitSettings {
    fn default() -> Self {
        Self { amplitude: 3.0, damping_time_s: 32e-9, duration: 40.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSettings {
    /// Paths written to `paths/`.
    pub export_paths: usize,
    /// Keep every n-th state in exported paths and phase files.
    pub path_stride: usize,
    /// Write spectra with SI axes (seconds, Hz).
    pub si: bool,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self { export_paths: 1, path_stride: 100, si: false }
    }
}

/// Everything a run needs. Parsed from TOML; unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub potential: PotentialSettings,
    pub units: UnitSystem,
    pub solver: SolverSettings,
    pub sampling: SamplingSettings,
    pub analysis: AnalysisSettings,
    pub orbit: OrbitSettings,
    pub output: OutputSettings,
    /// Written into manifests; ignored when running.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<toml::Table>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<toml::Table>,
}

impl RunConfig {
    /// Parses and validates; errors carry `origin:line:` prefixes.
    pub fn parse(source: &str, origin: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(source).map_err(|e| {
            let line = e.span().map(|s| line_of(source, s.start));
            Error::Config(anchored(origin, line, e.message()))
        })?;
        config
            .check()
            .map_err(|(section, key, msg)| Error::Config(anchored(origin, key_line(source, section, key), &msg)))?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let source = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: cannot read config: {e}", path.display())))?;
        Self::parse(&source, &path.display().to_string())
    }

    /// Validation without source positions.
    pub fn validate(&self) -> Result<()> {
        self.check().map_err(|(section, key, msg)| Error::Config(format!("[{section}] {key}: {msg}")))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn seed(&self) -> Result<u64> {
        self.sampling
            .seed
            .ok_or_else(|| Error::Config("sampling.seed is mandatory (set it in the config or pass --seed)".into()))
    }

    pub fn potential(&self) -> Potential {
        Potential { kind: self.potential.kind, v0: self.potential.v0, x0_sq: self.potential.x0_sq }
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let s = &self.solver;
        Ok(SolverConfig {
            grid: Grid::symmetric(s.grid_half_width, s.grid_points)?,
            parametrization: OddSplineParametrization { spacing: s.knot_spacing, n_knots: s.n_knots },
            evolution: EvolutionConfig {
                sigma0: s.sigma0,
                tol: s.tol_energy,
                patience: s.patience,
                max_generations: s.max_iterations,
                population: None,
                seed: self.seed()?,
            },
        })
    }

    pub fn oracle_grid(&self) -> Result<Grid> {
        Grid::with_spacing(self.solver.oracle_half_width, self.solver.oracle_spacing)
    }

    /// Stationary sampling: burn-in applied, every step recorded.
    pub fn sampling(&self) -> Result<Sampling> {
        let s = &self.sampling;
        Ok(Sampling { seed: self.seed()?, dt: s.dt, n_steps: s.n_steps, burn_in: s.burn_in, record_stride: 1 })
    }

    /// Orbit scenarios start at `t = 0` and run for `orbit.duration`.
    pub fn orbit_sampling(&self) -> Result<Sampling> {
        let s = &self.sampling;
        let n_steps = (self.orbit.duration / s.dt).round() as usize;
        Ok(Sampling { seed: self.seed()?, dt: s.dt, n_steps, burn_in: 0, record_stride: 1 })
    }

    pub fn acf_config(&self) -> AcfConfig {
        let a = &self.analysis;
        AcfConfig { window_stride: a.window_stride, max_lag: a.max_lag, lag_step: a.lag_step }
    }

    fn check(&self) -> std::result::Result<(), (&'static str, &'static str, String)> {
        fn pos(section: &'static str, key: &'static str, v: f64) -> std::result::Result<(), (&'static str, &'static str, String)> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err((section, key, format!("must be a positive number, got {v}")))
            }
        }
        fn at_least(
            section: &'static str,
            key: &'static str,
            v: usize,
            min: usize,
        ) -> std::result::Result<(), (&'static str, &'static str, String)> {
            if v >= min {
                Ok(())
            } else {
                Err((section, key, format!("must be >= {min}, got {v}")))
            }
        }
        pos("potential", "v0", self.potential.v0)?;
        pos("potential", "x0_sq", self.potential.x0_sq)?;
        pos("units", "mass_kg", self.units.mass_kg)?;
        pos("units", "omega_rad_s", self.units.omega_rad_s)?;
        let s = &self.solver;
        pos("solver", "grid_half_width", s.grid_half_width)?;
        at_least("solver", "grid_points", s.grid_points, 3)?;
        pos("solver", "knot_spacing", s.knot_spacing)?;
        at_least("solver", "n_knots", s.n_knots, 1)?;
        pos("solver", "sigma0", s.sigma0)?;
        pos("solver", "tol_energy", s.tol_energy)?;
        at_least("solver", "patience", s.patience, 1)?;
        at_least("solver", "max_iterations", s.max_iterations, 1)?;
        pos("solver", "oracle_half_width", s.oracle_half_width)?;
        pos("solver", "oracle_spacing", s.oracle_spacing)?;
        let m = &self.sampling;
        pos("sampling", "dt", m.dt)?;
        at_least("sampling", "n_steps", m.n_steps, 1)?;
        at_least("sampling", "n_paths", m.n_paths, 1)?;
        if m.burn_in >= m.n_steps {
            return Err(("sampling", "burn_in", format!("must be below n_steps ({}), got {}", m.n_steps, m.burn_in)));
        }
        let a = &self.analysis;
        at_least("analysis", "window_stride", a.window_stride, 1)?;
        at_least("analysis", "lag_step", a.lag_step, 1)?;
        if a.window_stride % a.lag_step != 0 {
            return Err(("analysis", "lag_step", format!("must divide window_stride ({})", a.window_stride)));
        }
        at_least("analysis", "max_lag", a.max_lag, a.lag_step)?;
        if let Some(level) = a.noise_level {
            if !(level.is_finite() && level >= 0.0) {
                return Err(("analysis", "noise_level", format!("must be >= 0, got {level}")));
            }
        }
        at_least("analysis", "histogram_bins", a.histogram_bins, 2)?;
        pos("analysis", "histogram_half_width", a.histogram_half_width)?;
        at_least("analysis", "smoothing_window", a.smoothing_window, 1)?;
        let o = &self.orbit;
        if !(o.amplitude.is_finite() && o.amplitude >= 0.0) {
            return Err(("orbit", "amplitude", format!("must be >= 0, got {}", o.amplitude)));
        }
        pos("orbit", "damping_time_s", o.damping_time_s)?;
        pos("orbit", "duration", o.duration)?;
        at_least("output", "path_stride", self.output.path_stride, 1)?;
        Ok(())
    }
}

fn anchored(origin: &str, line: Option<usize>, message: &str) -> String {
    match line {
        Some(l) => format!("{origin}:{l}: {}", message.trim_end()),
        None => format!("{origin}: {}", message.trim_end()),
    }
}

fn line_of(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

/// 1-based line of `key` inside `[section]`, if the file sets it.
fn key_line(source: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in source.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name.trim().to_string();
        } else if current == section && line.split('=').next().map(str::trim) == Some(key) {
            return Some(i + 1);
        }
    }
    None
}

/// Commented default configuration, printed by `config --example`.
pub const EXAMPLE_CONFIG: &str = r#"# stochmech run configuration. Every key is optional except sampling.seed;
# the values below are the defaults.

# ground-state | sample | analyze | coherent | cool | oracle
scenario = "ground-state"

[potential]
kind = "harmonic"          # harmonic | gaussian | lorentzian
v0 = 1.0                   # depth, reduced energy
x0_sq = 1.0                # squared width, reduced length^2

[units]
mass_kg = 2.8e-18
omega_rad_s = 62831853.071795866  # 2 pi * 10 MHz

[solver]
grid_half_width = 8.0      # energy functional integrated on [-w, w]
grid_points = 4001
knot_spacing = 0.5         # odd spline knots at k * spacing, k = 1..n_knots
n_knots = 12
sigma0 = 0.05              # initial evolution-strategy step size
tol_energy = 1e-6          # stop when the energy improves less than this ...
patience = 200             # ... over this many iterations
max_iterations = 20000
oracle_half_width = 10.0   # finite-difference reference grid
oracle_spacing = 0.01

[sampling]
seed = 2168461             # mandatory
dt = 1e-4
n_steps = 10000000
n_paths = 1
burn_in = 100000           # steps dropped before statistics

[analysis]
window_stride = 1000       # a window starts every n-th sample
max_lag = 100000           # samples
lag_step = 1               # samples between ACF lags; must divide window_stride
lag_window = "rectangular" # rectangular | bartlett | hann
# noise_level = 1e-3       # white floor added to psd_noise_<kind>.csv
histogram_bins = 240
histogram_half_width = 6.0
smoothing_window = 10000   # moving-average points for phase portraits

[orbit]
amplitude = 3.0            # x_cl(0) = 0, p_cl(0) = amplitude
damping_time_s = 3.2e-8    # cooling damping time, converted with [units]
duration = 40.0            # reduced time simulated by coherent and cool

[output]
export_paths = 1
path_stride = 100
si = false                 # spectra axes in seconds and Hz (same as --si)
"#;

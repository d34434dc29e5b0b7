//! Configuration-driven runs and plot-data emission behind the `stochmech`
//! binary.

mod config;
mod plot;
mod run;
mod table;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{
    AnalysisSettings, OrbitSettings, OutputSettings, PotentialSettings, RunConfig, SamplingSettings, Scenario,
    SolverSettings, EXAMPLE_CONFIG,
};
pub use plot::{emit_plot_data, Figure, PlotReport};
pub use run::{run, RunReport};
pub use table::{read_table, write_table};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "stochmech", version, about = "Stochastic-mechanics simulator for a levitated nanoparticle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the scenario of the config file.
    #[arg(long, global = true)]
    pub scenario: Option<Scenario>,
    /// Overrides sampling.seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "run")]
    pub out: PathBuf,
    /// Write spectra with SI axes.
    #[arg(long, global = true)]
    pub si: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario (the default when no subcommand is given).
    Run,
    /// Configuration helpers.
    Config {
        /// Print a commented configuration holding every default.
        #[arg(long)]
        example: bool,
    },
    /// Turn the artifacts in --out into plot-ready CSV files.
    PlotData {
        /// Only these figures; missing inputs are then an error.
        #[arg(long = "figure", value_enum)]
        figures: Vec<Figure>,
    },
}

impl Cli {
    /// Loads the config file (or defaults) and applies the flag overrides.
    pub fn resolve_config(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(s) = self.scenario {
            config.scenario = s;
        }
        if let Some(seed) = self.seed {
            config.sampling.seed = Some(seed);
        }
        config.output.si |= self.si;
        config.results = None;
        config.provenance = None;
        Ok(config)
    }
}

/// Executes parsed arguments and returns the process exit status.
pub fn execute(cli: &Cli) -> i32 {
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("stochmech: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    match cli.command.as_ref().unwrap_or(&Command::Run) {
        Command::Config { example } => {
            if !example {
                return Err(Error::Config("nothing to do; try `config --example`".into()));
            }
            print!("{EXAMPLE_CONFIG}");
            Ok(())
        }
        Command::Run => {
            let config = cli.resolve_config()?;
            let report = run(&config, &cli.out)?;
            for (key, value) in &report.results {
                println!("{key} = {value}");
            }
            println!("manifest: {}", report.manifest.display());
            Ok(())
        }
        Command::PlotData { figures } => {
            let selected = (!figures.is_empty()).then_some(figures.as_slice());
            let report = emit_plot_data(&cli.out, selected)?;
            for f in &report.written {
                println!("wrote {}", f.display());
            }
            for (fig, why) in &report.skipped {
                println!("skipped {}: {why}", fig.file_name());
            }
            Ok(())
        }
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    execute(&Cli::parse())
}

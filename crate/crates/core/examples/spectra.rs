//! Position autocorrelation and power spectrum of the harmonic ground state,
//! compared with `exp(-|tau|)` and `2 / (1 + (2 pi f)^2)`, followed by a
//! white measurement floor placed to cross the signal at a chosen frequency.
//!
//! cargo run --release --example spectra -- [n_steps] [n_paths]

use std::f64::consts::PI;

use stochmech::sde::{ou_system, reduce_paths, Sampling};
use stochmech::timeseries::{
    add_noise_floor, crossover_frequency, floor_for_crossover, psd_with_window, AcfAccumulator, AcfConfig, LagWindow,
};

fn main() -> stochmech::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let n_steps = args.next().unwrap_or(4_000_000);
    let n_paths = args.next().unwrap_or(4);
    let sampling = Sampling { n_steps, burn_in: 10_000, ..Sampling::default() };
    let config = AcfConfig { window_stride: 1000, max_lag: 100_000, lag_step: 100 };

    let mut acf = AcfAccumulator::new(config)?;
    reduce_paths(
        &ou_system(),
        |_| [0.0, 0.0],
        &sampling,
        n_paths,
        |_| AcfAccumulator::new(config).expect("valid config"),
        |a, _, s| a.push(s[0]),
        |a| acf.merge(a).expect("same config"),
    )?;
    let acf = acf.finish(sampling.dt)?;
    let est = psd_with_window(&acf, LagWindow::Rectangular)?;
    let psd = &est.psd;

    println!("{} windows, Parseval integral {:.4}", acf.n_windows, psd.parseval_integral()?);
    println!("{:>6} {:>9} {:>9}", "tau", "ACF", "exp");
    for tau in [0.0, 0.5, 1.0, 2.0, 3.0] {
        println!("{tau:>6} {:>9.4} {:>9.4}", acf.value_at(tau).unwrap_or(f64::NAN), (-tau).exp());
    }
    println!("{:>6} {:>10} {:>10}", "f", "PSD", "Lorentz");
    for f in [0.05, 0.1, 0.5, 1.0, 2.0, 5.0] {
        let exact = 2.0 / (1.0 + (2.0 * PI * f).powi(2));
        println!("{f:>6} {:>10.3e} {exact:>10.3e}", psd.value_at(f).unwrap_or(f64::NAN));
    }

    let level = floor_for_crossover(psd, 1.0)?;
    let noisy = add_noise_floor(psd, level)?;
    let found = crossover_frequency(&noisy, level).unwrap_or(f64::NAN);
    println!("floor {level:.3e} meets the signal at f = {found:.3}");
    Ok(())
}

//! A coherent state: ground-state fluctuations riding on a classical orbit.
//! Writes raw and smoothed phase-space paths to CSV.
//!
//! cargo run --release --example coherent_orbit -- [out_dir]

use stochmech::sde::{coherent_system, moving_average, simulate_ensemble, ClassicalTrajectory, Sampling};
use stochmech::timeseries::RunningMoments;

fn main() -> stochmech::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "coherent_out".into());
    let orbit = ClassicalTrajectory::conservative(3.0);
    let sampling = Sampling { n_steps: 400_000, burn_in: 0, record_stride: 10, ..Sampling::default() };
    let start = orbit.at(0.0);
    let raw = simulate_ensemble(&coherent_system(orbit), |_| [start.x, start.p], &sampling, 4)?;
    let smooth = moving_average(&raw, 1000)?;

    for (name, e) in [("raw", &raw), ("smoothed", &smooth)] {
        let r: RunningMoments = e.paths.iter().flat_map(|p| p.radius()).collect();
        println!("{name:<9} radius {:.3} +/- {:.3}", r.mean(), r.std_dev());
    }
    let files = raw.write_csv(&out, "raw")?;
    smooth.write_csv(&out, "smoothed")?;
    println!("wrote {} paths per set into {out}/", files.len());
    Ok(())
}

//! Feedback cooling modelled as a damped classical orbit. Prints the pooled
//! squared radius in consecutive time windows as the particle settles into
//! the ground state.
//!
//! cargo run --release --example cooling -- [damping_time_ns] [n_paths]

use stochmech::sde::{coherent_system, cooling_trajectory, reduce_paths, Sampling};
use stochmech::timeseries::RunningMoments;
use stochmech::{Dimension, UnitSystem};

fn main() -> stochmech::Result<()> {
    let mut args = std::env::args().skip(1);
    let td_ns: f64 = args.next().map_or(32.0, |a| a.parse().expect("numeric damping time"));
    let n_paths: usize = args.next().map_or(32, |a| a.parse().expect("integer path count"));
    let td = UnitSystem::default().from_si(td_ns * 1e-9, Dimension::Time);
    let orbit = cooling_trajectory(3.0, td)?;
    let dt = 1e-3;
    let duration = 40.0;
    let sampling = Sampling { dt, n_steps: (duration / dt) as usize, burn_in: 0, record_stride: 1, ..Sampling::default() };
    let n_windows = 20;
    let width = duration / n_windows as f64;
    let start = orbit.at(0.0);

    let mut windows = vec![RunningMoments::new(); n_windows];
    reduce_paths(
        &coherent_system(orbit),
        |_| [start.x, start.p],
        &sampling,
        n_paths,
        |_| vec![RunningMoments::new(); n_windows],
        |acc, t, s| {
            let w = ((t / width) as usize).min(n_windows - 1);
            acc[w].push(s[0] * s[0] + s[1] * s[1]);
        },
        |acc| windows.iter_mut().zip(&acc).for_each(|(a, b)| a.merge(b)),
    )?;
    println!("damping time {td_ns} ns = {td:.3} reduced, {n_paths} paths");
    println!("{:>12} {:>10} {:>10}", "window", "<x^2+p^2>", "classical");
    for (i, m) in windows.iter().enumerate() {
        let t = (i as f64 + 0.5) * width;
        println!("{:>5.0}-{:<6.0} {:>10.4} {:>10.4}", i as f64 * width, (i + 1) as f64 * width, m.mean(), 2.0 * orbit.energy(t));
    }
    Ok(())
}

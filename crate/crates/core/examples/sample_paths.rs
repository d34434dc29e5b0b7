//! Samples ground-state paths for each trap and compares the visitation
//! statistics with the variational solution.
//!
//! cargo run --release --example sample_paths -- [n_steps] [n_paths]

use std::time::Instant;

use stochmech::groundstate::{solve_ground_state, SolverConfig};
use stochmech::sde::{fold_paths, ground_state_system, Sampling};
use stochmech::timeseries::{RunningMoments, StreamingHistogram};
use stochmech::{Potential, PotentialKind};

struct Stats {
    x: RunningMoments,
    p: RunningMoments,
    hist: StreamingHistogram,
}

fn main() -> stochmech::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let n_steps = args.next().unwrap_or(2_000_000);
    let n_paths = args.next().unwrap_or(4);
    let sampling = Sampling { n_steps, burn_in: 100_000.min(n_steps / 2), ..Sampling::default() };

    println!("{n_paths} paths x {n_steps} steps, dt = {}", sampling.dt);
    println!("{:<11} {:>8} {:>8} {:>8} {:>8} {:>9} {:>7}", "potential", "sigma_x", "sigma_p", "product", "exact", "L2(rho)", "time");
    for kind in PotentialKind::ALL {
        let sol = solve_ground_state(&Potential::reduced(kind), &SolverConfig::default())?;
        let system = ground_state_system(sol.u0.clone());
        let start = Instant::now();
        let per_path = fold_paths(
            &system,
            |_| [0.0, 0.0],
            &sampling,
            n_paths,
            |_| Stats {
                x: RunningMoments::new(),
                p: RunningMoments::new(),
                hist: StreamingHistogram::new(-6.0, 6.0, 240).unwrap(),
            },
            |acc, _, s| {
                acc.x.push(s[0]);
                acc.p.push(s[1]);
                acc.hist.push(s[0]);
            },
        )?;
        let elapsed = start.elapsed().as_secs_f64();
        let mut total = Stats {
            x: RunningMoments::new(),
            p: RunningMoments::new(),
            hist: StreamingHistogram::new(-6.0, 6.0, 240)?,
        };
        for s in &per_path {
            total.x.merge(&s.x);
            total.p.merge(&s.p);
            total.hist.merge(&s.hist)?;
        }
        let sampled = total.hist.finish()?.to_density()?;
        let l2 = sampled.l2_distance(&sol.density());
        let (sx, sp) = (total.x.std_dev(), total.p.std_dev());
        println!(
            "{:<11} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>9.4} {:>6.1}s",
            kind.name(),
            sx,
            sp,
            sx * sp,
            sol.uncertainty_product,
            l2,
            elapsed
        );
    }
    Ok(())
}

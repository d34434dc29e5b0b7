use std::f64::consts::PI;

use stochmech::groundstate::{solve_ground_state, SolverConfig};
use stochmech::sde::{
    coherent_system, fold_paths, ground_state_system, heun_integrate, moving_average, ou_system, reduce_paths,
    run_path, simulate_ensemble, ClassicalTrajectory, FnSystem, Sampling, WienerStream, DEFAULT_SEED,
};
use stochmech::timeseries::RunningMoments;
use stochmech::Potential;

fn short(dt: f64, n_steps: usize) -> Sampling {
    Sampling { seed: DEFAULT_SEED, dt, n_steps, burn_in: 0, record_stride: 1 }
}

fn terminal_moments<S: stochmech::sde::SdeSystem<2, 1>>(
    system: &S,
    initial: [f64; 2],
    sampling: &Sampling,
    n_paths: usize,
) -> (RunningMoments, RunningMoments) {
    let last = sampling.n_steps;
    let mut mx = RunningMoments::new();
    let mut mp = RunningMoments::new();
    reduce_paths(
        system,
        |_| initial,
        sampling,
        n_paths,
        |_| (0usize, [0.0; 2]),
        |(k, end), _, s| {
            if *k == last {
                *end = *s;
            }
            *k += 1;
        },
        |(_, end)| {
            mx.push(end[0]);
            mp.push(end[1]);
        },
    )
    .unwrap();
    (mx, mp)
}

#[test]
fn wiener_terminal_variance() {
    let walk = FnSystem::new("walk", |_, _: &[f64; 2]| [0.0, 0.0], |_, _: &[f64; 2]| [[1.0], [0.0]]);
    let (mx, _) = terminal_moments(&walk, [0.0, 0.0], &short(1e-3, 1000), 10_000);
    assert!(mx.mean().abs() < 4.0 * mx.std_error(), "mean {}", mx.mean());
    assert!((mx.variance() - 1.0).abs() < 0.05, "variance {}", mx.variance());
}

#[test]
fn ou_transient_matches_closed_form() {
    let n = 20_000;
    let (mx, mp) = terminal_moments(&ou_system(), [1.0, -1.0], &short(1e-2, 100), n);
    let mean = (-1.0f64).exp();
    let var = (1.0 - (-2.0f64).exp()) / 2.0;
    assert!((mx.mean() - mean).abs() < 4.0 * mx.std_error(), "{} vs {mean}", mx.mean());
    assert!((mp.mean() + mean).abs() < 4.0 * mp.std_error());
    let var_se = var * (2.0 / n as f64).sqrt();
    assert!((mx.variance() - var).abs() < 4.0 * var_se, "{} vs {var}", mx.variance());
}

#[test]
fn ou_stationary_variance() {
    let sampling = Sampling { seed: 7, dt: 1e-3, n_steps: 1_000_000, burn_in: 10_000, record_stride: 1 };
    let per_path = fold_paths(&ou_system(), |_| [0.0, 0.0], &sampling, 32, |_| RunningMoments::new(), |m, _, s| {
        m.push(s[0])
    })
    .unwrap();
    let mut total = RunningMoments::new();
    per_path.iter().for_each(|m| total.merge(m));
    assert!((total.variance() - 0.5).abs() < 0.02, "variance {}", total.variance());
}

#[test]
fn shared_increment_keeps_p_equal_to_minus_x() {
    let stream = WienerStream::new(DEFAULT_SEED, 0, 1e-3).unwrap();
    let path = &heun_integrate(&ou_system(), [0.0, 0.0], 1_000_000, &stream).unwrap().paths[0];
    let worst = path.x.iter().zip(&path.p).map(|(x, p)| (x + p).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-9, "max |x + p| = {worst}");
}

#[test]
fn ground_state_paths_stay_on_the_osmotic_manifold() {
    let sol = solve_ground_state(&Potential::gaussian(), &SolverConfig::default()).unwrap();
    let system = ground_state_system(sol.u0.clone());
    let mut worst: f64 = 0.0;
    run_path(&system, system.consistent_initial(0.3), &short(1e-4, 1_000_000), 0, |_, s| {
        worst = worst.max((s[1] - sol.u0.value(s[0])).abs())
    })
    .unwrap();
    assert!(worst < 0.01, "max |p - u(x)| = {worst}");
}

#[test]
fn ensemble_paths_do_not_depend_on_ensemble_size() {
    let sampling = short(1e-3, 2000);
    let small = simulate_ensemble(&ou_system(), |_| [0.0, 0.0], &sampling, 2).unwrap();
    let large = simulate_ensemble(&ou_system(), |_| [0.0, 0.0], &sampling, 9).unwrap();
    assert_eq!(small.paths[..], large.paths[..2]);
    assert_ne!(large.paths[0], large.paths[1]);
}

#[test]
fn coherent_smoothing_thins_the_annulus() {
    let system = coherent_system(ClassicalTrajectory::conservative(3.0));
    let sampling = short(1e-3, 40_000);
    let raw = simulate_ensemble(&system, |_| [0.0, 3.0], &sampling, 4).unwrap();
    let smooth = moving_average(&raw, 1000).unwrap();
    let spread = |e: &stochmech::sde::PathEnsemble| {
        let m: RunningMoments = e.paths.iter().flat_map(|p| p.radius()).collect();
        m.std_dev()
    };
    let (r, s) = (spread(&raw), spread(&smooth));
    assert!(s < 0.95 * r, "smoothed {s} vs raw {r}");
}

#[test]
fn coherent_mean_follows_the_orbit_over_a_period() {
    let system = coherent_system(ClassicalTrajectory::conservative(2.0));
    let dt = 1e-2;
    let sampling = short(dt, (2.0 * PI / dt).round() as usize);
    let (mx, mp) = terminal_moments(&system, [0.0, 2.0], &sampling, 5_000);
    let t = sampling.n_steps as f64 * dt;
    assert!((mx.mean() - 2.0 * t.sin()).abs() < 4.0 * mx.std_error());
    assert!((mp.mean() - 2.0 * t.cos()).abs() < 4.0 * mp.std_error());
}

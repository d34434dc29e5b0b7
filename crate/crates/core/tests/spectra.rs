use std::f64::consts::PI;

use stochmech::sde::{fold_paths, ou_system, Sampling};
use stochmech::timeseries::{
    psd_with_window, AcfAccumulator, AcfConfig, AxisUnits, LagWindow, RunningMoments, Spectrum, SpectrumKind,
};
use stochmech::UnitSystem;

const DT: f64 = 1e-2;

fn config() -> AcfConfig {
    AcfConfig { window_stride: 10, max_lag: 200, lag_step: 1 }
}

/// ACF of the harmonic ground-state position, one spectrum per seed.
fn per_path_acf(n_steps: usize, n_paths: usize) -> Vec<Spectrum> {
    let sampling = Sampling { seed: 99, dt: DT, n_steps, burn_in: 1000, record_stride: 1 };
    fold_paths(&ou_system(), |_| [0.0, 0.0], &sampling, n_paths, |_| AcfAccumulator::new(config()).unwrap(), |a, _, s| {
        a.push(s[0])
    })
    .unwrap()
    .into_iter()
    .map(|a| a.finish(DT).unwrap())
    .collect()
}

#[test]
fn doubling_the_series_halves_the_acf_variance() {
    let spread = |n_steps| {
        let m: RunningMoments = per_path_acf(n_steps, 200).iter().map(|s| s.value_at(1.0).unwrap()).collect();
        (m.mean(), m.variance())
    };
    let (m1, v1) = spread(20_000);
    let (m2, v2) = spread(40_000);
    let e1 = (-1.0f64).exp();
    assert!((m1 - e1).abs() < 0.02 && (m2 - e1).abs() < 0.02, "{m1} {m2}");
    let ratio = v2 / v1;
    assert!((0.3..0.7).contains(&ratio), "variance ratio {ratio}");
}

#[test]
fn sampled_psd_follows_the_lorentzian() {
    let long = AcfConfig { max_lag: 1000, ..config() };
    let mut pooled = AcfAccumulator::new(long).unwrap();
    let sampling = Sampling { seed: 5, dt: DT, n_steps: 200_000, burn_in: 1000, record_stride: 1 };
    for a in fold_paths(&ou_system(), |_| [0.0, 0.0], &sampling, 16, |_| AcfAccumulator::new(long).unwrap(), |a, _, s| {
        a.push(s[0])
    })
    .unwrap()
    {
        pooled.merge(a).unwrap();
    }
    let est = psd_with_window(&pooled.finish(DT).unwrap(), LagWindow::Rectangular).unwrap();
    for f in [0.0, 0.1, 0.2, 0.5, 1.0] {
        let exact = 2.0 / (1.0 + (2.0 * PI * f).powi(2));
        let got = est.psd.value_at(f).unwrap();
        assert!((got / exact - 1.0).abs() < 0.1, "f = {f}: {got} vs {exact}");
    }
}

#[test]
fn si_conversion_preserves_parseval_and_round_trips_through_csv() {
    let acf = Spectrum::acf_from_values((0..=2000).map(|k| (-(k as f64) * DT).exp()).collect(), DT).unwrap();
    let psd = psd_with_window(&acf, LagWindow::Hann).unwrap().psd;
    let units = UnitSystem::new(2.8e-18, 2.0 * PI * 104e3).unwrap();
    let si = psd.to_si(&units);
    assert_eq!(si.units, AxisUnits::Si);
    assert!((si.axis[1] - psd.axis[1] * units.omega_rad_s).abs() < 1e-9 * si.axis[1]);
    let (a, b) = (psd.parseval_integral().unwrap(), si.parseval_integral().unwrap());
    assert!((a - b).abs() < 1e-12, "{a} vs {b}");

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("psd.csv");
    si.write_csv(&file).unwrap();
    let back = Spectrum::read_csv(&file, SpectrumKind::Psd, AxisUnits::Si).unwrap();
    assert_eq!(back.axis, si.axis);
    assert_eq!(back.values, si.values);
}

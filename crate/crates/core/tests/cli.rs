use std::fs;
use std::path::Path;
use std::process::Command;

use stochmech::cli::{emit_plot_data, read_table, run, Figure, RunConfig, Scenario};
use stochmech::PotentialKind;

fn quick(scenario: Scenario, kind: PotentialKind) -> RunConfig {
    let mut c = RunConfig::default();
    c.scenario = scenario;
    c.potential.kind = kind;
    c.sampling.seed = Some(11);
    c.sampling.n_steps = 300_000;
    c.sampling.burn_in = 10_000;
    c.sampling.n_paths = 2;
    c.analysis.max_lag = 20_000;
    c.analysis.lag_step = 10;
    c.analysis.smoothing_window = 1000;
    c.orbit.duration = 20.0;
    c
}

fn result(manifest: &Path, key: &str) -> f64 {
    let config = RunConfig::load(manifest).unwrap();
    let v = &config.results.unwrap()[key];
    v.as_float().or_else(|| v.as_integer().map(|i| i as f64)).unwrap()
}

fn columns(file: &Path) -> Vec<String> {
    read_table(file).unwrap().0
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stochmech"))
}

#[test]
fn oracle_scenario_reports_harmonic_energy() {
    let out = tempfile::tempdir().unwrap();
    let report = run(&quick(Scenario::Oracle, PotentialKind::Harmonic), out.path()).unwrap();
    assert!((result(&report.manifest, "energy") - 0.5).abs() < 1e-4);
    let (headers, cols) = read_table(out.path().join("oracle_harmonic.csv")).unwrap();
    assert_eq!(headers, ["x", "psi", "rho", "u", "potential"]);
    assert!(cols[0].len() > 1000);
}

#[test]
fn ground_state_scenario_gaussian_energy() {
    let out = tempfile::tempdir().unwrap();
    let report = run(&quick(Scenario::GroundState, PotentialKind::Gaussian), out.path()).unwrap();
    let energy = result(&report.manifest, "energy");
    assert!((energy - 0.40559).abs() < 2e-3, "{energy}");
    assert!(out.path().join("solution_gaussian.json").exists());
}

#[test]
fn cooling_ends_inside_the_ground_state_disk() {
    let out = tempfile::tempdir().unwrap();
    let mut c = quick(Scenario::Cool, PotentialKind::Harmonic);
    c.sampling.n_paths = 8;
    c.sampling.dt = 1e-3;
    let report = run(&c, out.path()).unwrap();
    let r = result(&report.manifest, "terminal_radius_smoothed");
    assert!(r < 1.0, "{r}");
    let (headers, _) = read_table(out.path().join("phase_cool.csv")).unwrap();
    assert_eq!(headers[..3], ["t", "x", "p"]);
}

#[test]
fn plot_data_from_a_full_set_of_runs() {
    let out = tempfile::tempdir().unwrap();
    for kind in PotentialKind::ALL {
        run(&quick(Scenario::Analyze, kind), out.path()).unwrap();
    }
    for scenario in [Scenario::Coherent, Scenario::Cool] {
        let mut c = quick(scenario, PotentialKind::Harmonic);
        c.sampling.dt = 1e-3;
        run(&c, out.path()).unwrap();
    }
    let report = emit_plot_data(out.path(), None).unwrap();
    assert_eq!(report.written.len(), 7, "skipped: {:?}", report.skipped);

    let u = columns(&out.path().join(Figure::U.file_name()));
    assert_eq!(u, ["x", "u_harmonic", "u_gaussian", "u_lorentzian", "minus_x"]);

    let (acf_head, acf) = read_table(out.path().join(Figure::Acf.file_name())).unwrap();
    assert_eq!(acf_head[..2], ["tau", "exp_ref"]);
    for (t, e) in acf[0].iter().zip(&acf[1]) {
        assert!((e - (-t).exp()).abs() < 1e-12);
    }

    let (psd_head, psd) = read_table(out.path().join(Figure::Psd.file_name())).unwrap();
    assert_eq!(psd_head[..3], ["f_reduced", "f_hz", "lorentzian_ref"]);
    let omega = RunConfig::default().units.omega_rad_s;
    for (f, hz) in psd[0].iter().zip(&psd[1]) {
        assert!((hz - f * omega).abs() <= 1e-9 * hz.abs().max(1.0));
    }
}

#[test]
fn manifest_reproduces_its_run() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let report = run(&quick(Scenario::Analyze, PotentialKind::Lorentzian), first.path()).unwrap();
    let mut replay = RunConfig::load(&report.manifest).unwrap();
    replay.results = None;
    replay.provenance = None;
    run(&replay, second.path()).unwrap();
    for file in &report.files {
        let name = file.strip_prefix(first.path()).unwrap();
        assert_eq!(fs::read(file).unwrap(), fs::read(second.path().join(name)).unwrap(), "{}", name.display());
    }
}

#[test]
fn binary_exit_codes() {
    let out = tempfile::tempdir().unwrap();

    let status = binary().args(["config", "--example"]).output().unwrap();
    assert!(status.status.success());
    let example = out.path().join("example.toml");
    fs::write(&example, &status.stdout).unwrap();
    assert_eq!(RunConfig::load(&example).unwrap(), RunConfig::parse(stochmech::cli::EXAMPLE_CONFIG, "x").unwrap());

    let bad = out.path().join("bad.toml");
    fs::write(&bad, "scenario = \"oracle\"\n[sampling]\nseed = 1\nbogus = 2\n").unwrap();
    let o = binary().arg("--config").arg(&bad).arg("--out").arg(out.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.toml:4:"), "{}", String::from_utf8_lossy(&o.stderr));

    let missing = out.path().join("nope.toml");
    let o = binary().arg("--config").arg(&missing).output().unwrap();
    assert_eq!(o.status.code(), Some(2));

    let blocked = out.path().join("file");
    fs::write(&blocked, "").unwrap();
    let o = binary().args(["--scenario", "oracle", "--seed", "3", "--out"]).arg(blocked.join("sub")).output().unwrap();
    assert_eq!(o.status.code(), Some(1));

    let empty = out.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let o = binary().args(["plot-data", "--figure", "acf", "--out"]).arg(&empty).output().unwrap();
    assert_eq!(o.status.code(), Some(2));

    let o = binary()
        .args(["--scenario", "oracle", "--seed", "3", "--out"])
        .arg(out.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.path().join("manifest_oracle_harmonic.toml").exists());
}

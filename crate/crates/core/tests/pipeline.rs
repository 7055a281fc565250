use netrecon::experiment::*;
use netrecon::noise::{NoiseSpec, NoiseTarget};

fn small(noise: Option<NoiseSpec>, simulator: SimulatorKind) -> ExperimentConfig {
    let mut network = NetworkTemplate::preset(6);
    network.horizon = 150.0;
    network.dt = 1.0 / 100.0;
    ExperimentConfig {
        network,
        connectivity: ConnectivitySpec::Nonsymmetric,
        noise,
        selection: SelectionSpec::Auto,
        simulator,
        replicates: 3,
        seed: 42,
        output_dir: None,
    }
}

#[test]
fn exact_noise_free_pipeline_is_identity() {
    let rep = run_experiment(&small(None, SimulatorKind::Exact)).unwrap();
    for r in &rep.replicates {
        let e = r.relative_error.unwrap();
        assert!(e <= 1e-6, "replicate {}: {e}", r.index);
    }
}

#[test]
fn runs_are_deterministic_across_thread_counts() {
    let cfg = small(Some(NoiseSpec::new(NoiseTarget::Rhs, 0.05, 0)), SimulatorKind::Euler);
    let a = run_experiment(&cfg).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| run_experiment(&cfg).unwrap());
    assert_eq!(a.errors(), b.errors());
    let ka: Vec<_> = a.replicates.iter().map(|r| r.kappas.clone()).collect();
    let kb: Vec<_> = b.replicates.iter().map(|r| r.kappas.clone()).collect();
    assert_eq!(ka, kb);
    let mut other = cfg.clone();
    other.seed = 43;
    assert_ne!(a.errors(), run_experiment(&other).unwrap().errors());
}

#[test]
fn artifacts_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(Some(NoiseSpec::new(NoiseTarget::Intervals, 0.05, 1)), SimulatorKind::Euler);
    cfg.replicates = 2;
    cfg.output_dir = Some(dir.path().to_path_buf());
    let rep = run_experiment(&cfg).unwrap();
    for f in ["report.json", "errors.csv", "connectivity_true.csv"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    for r in 0..2 {
        let sub = dir.path().join(format!("replicate_{r:03}"));
        for f in ["connectivity_inv.csv", "schedule.json", "spectra.csv"] {
            assert!(sub.join(f).is_file(), "{}", sub.join(f).display());
        }
    }
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["replicates"].as_array().unwrap().len(), 2);
    assert!(json["rng"].as_str().unwrap().contains("ChaCha8"));
    assert_eq!(rep.oracle_selection, false);
    let errors = std::fs::read_to_string(dir.path().join("errors.csv")).unwrap();
    assert_eq!(errors.lines().count(), 3);
}

#[test]
fn config_errors_are_reported() {
    let mut cfg = small(Some(NoiseSpec::new(NoiseTarget::Rhs, 1.5, 0)), SimulatorKind::Euler);
    assert!(run_experiment(&cfg).unwrap_err().is_config());
    cfg.noise = None;
    cfg.selection = SelectionSpec::MorozovStandard { nu: 1.0 };
    assert!(run_experiment(&cfg).unwrap_err().is_config());
    cfg.selection = SelectionSpec::Auto;
    cfg.replicates = 0;
    assert!(run_experiment(&cfg).unwrap_err().is_config());
}

#[test]
fn config_round_trips_through_json() {
    let cfg = small(Some(NoiseSpec::new(NoiseTarget::Intervals, 0.1, 5)), SimulatorKind::Exact);
    let text = serde_json::to_string(&cfg).unwrap();
    let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(cfg, back);
    let minimal: ExperimentConfig = serde_json::from_str(
        r#"{"network":{"n":4,"T":50},"connectivity":"symmetric","noise":{"target":"rhs","level":0.01}}"#,
    )
    .unwrap();
    assert_eq!(minimal.replicates, 10);
    assert_eq!(minimal.selection, SelectionSpec::Auto);
}

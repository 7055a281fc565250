use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use netrecon::diagnostics::{fit_decay, majority_vote, spectrum_diagnostics, DecayFit, SpectrumDiagnostics};
use netrecon::experiment::{
    reproduce_tables, run_experiment, write_cells_csv, write_tables_csv, ConnectivitySpec, ExperimentConfig,
    NetworkTemplate, ReproduceOptions, SimulatorKind,
};
use netrecon::inverse::{assemble_system, reconstruct_connectivity, usable_onsets, InversionReport, Selection};
use netrecon::noise::{perturb_rhs, perturb_schedule, NoiseSpec, NoiseTarget, RNG_ALGORITHM};
use netrecon::sim::{
    extract_firing_schedule, simulate_euler_with, simulate_exact, Recording, Trajectory,
};
use netrecon::{build_drive, ConnectivityMatrix, Error, FiringSchedule, NetworkConfig, Result};
use rand::SeedableRng;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::{Cli, Command, DiagnoseArgs, InvertArgs, Method, NoiseApplyArgs, ReproduceArgs, SimulateArgs, Target};

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate(a) => simulate(a, cli.seed),
        Command::Invert(a) => invert(a, cli.seed),
        Command::Diagnose(a) => diagnose(a, cli.seed),
        Command::Reproduce(a) => reproduce(a, cli.seed),
        Command::NoiseApply(a) => noise_apply(a, cli.seed),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let f = fs::File::open(path).map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    serde_json::from_reader(BufReader::new(f))
        .map_err(|e| Error::Config(format!("cannot parse {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Full network config, or a template whose missing `s0` is drawn from the seed.
fn load_network(path: &Path, seed: Option<u64>) -> Result<NetworkConfig> {
    let value: serde_json::Value = read_json(path)?;
    let mut cfg = match serde_json::from_value::<NetworkConfig>(value.clone()) {
        Ok(cfg) => cfg,
        Err(_) => {
            let template: NetworkTemplate = serde_json::from_value(value)
                .map_err(|e| Error::Config(format!("{} is not a network config: {e}", path.display())))?;
            let seed = seed.unwrap_or(0);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            template.instantiate(&mut rng, seed)?
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_connectivity(spec: &str, n: usize) -> Result<ConnectivityMatrix> {
    let w = match spec {
        "symmetric" => ConnectivitySpec::Symmetric.build(n)?,
        "nonsymmetric" | "non-symmetric" => ConnectivitySpec::Nonsymmetric.build(n)?,
        path if path.ends_with(".json") => read_json(Path::new(path))?,
        path => ConnectivitySpec::File(path.into()).build(n)?,
    };
    if w.n() != n {
        return Err(Error::Dimension(format!("connectivity is {0}×{0}, network n = {n}", w.n())));
    }
    Ok(w)
}

fn load_schedule(path: &Path, cfg: Option<&NetworkConfig>) -> Result<FiringSchedule> {
    let s: FiringSchedule = read_json(path)?;
    s.validate()?;
    if let Some(cfg) = cfg {
        if s.n != cfg.n {
            return Err(Error::Dimension(format!("schedule has n = {}, config n = {}", s.n, cfg.n)));
        }
    }
    Ok(s)
}

fn simulate(a: &SimulateArgs, seed: Option<u64>) -> Result<()> {
    let cfg = load_network(&a.config, seed)?;
    let w = load_connectivity(&a.connectivity, cfg.n)?;
    let stride = match (&a.out_trajectory, a.sample_dt) {
        (Some(_), None) => return Err(Error::Config("--out-trajectory needs --sample-dt".into())),
        (Some(_), Some(h)) => {
            let k = (h / cfg.dt).round();
            if !(k >= 1.0 && (h / cfg.dt - k).abs() < 1e-9 * k) {
                return Err(Error::Config(format!("--sample-dt {h} must be a positive multiple of dt = {}", cfg.dt)));
            }
            Some(k as usize)
        }
        (None, _) => None,
    };
    let traj = match a.method {
        Method::Euler => {
            let rec = stride.map_or(Recording::None, Recording::Every);
            simulate_euler_with(&cfg, &w, rec)?
        }
        Method::Exact => simulate_exact(&cfg, &w)?,
    };
    let schedule = extract_firing_schedule(&traj);
    log::info!("{} firing intervals, Γ has {} neurons", schedule.total_events(), schedule.gamma().len());
    write_json(&a.out_schedule, &schedule)?;
    if let Some(p) = &a.out_config {
        write_json(p, &cfg)?;
    }
    if let (Some(p), Some(k)) = (&a.out_trajectory, stride) {
        write_trajectory(p, &traj, cfg.dt * k as f64)?;
    }
    Ok(())
}

fn write_trajectory(path: &Path, traj: &Trajectory, step: f64) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    let n = traj.n();
    let header: Vec<String> = std::iter::once("t".to_string()).chain((0..n).map(|j| format!("s{j}"))).collect();
    writeln!(out, "{}", header.join(","))?;
    let count = (traj.horizon() / step + 1e-9).floor() as usize;
    for m in 0..=count {
        let t = m as f64 * step;
        let mut row = vec![format!("{t}")];
        for j in 0..n {
            let v = traj
                .drive_at(j, t)
                .ok_or_else(|| Error::Numerical(format!("no stored drive at t = {t}")))?;
            row.push(format!("{v:.12e}"));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct OriginFile {
    psi: f64,
    origin: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct InvertReport<'a> {
    selection: &'a str,
    relative_error: Option<f64>,
    #[serde(flatten)]
    inversion: &'a InversionReport,
}

fn invert(a: &InvertArgs, seed: Option<u64>) -> Result<()> {
    let cfg = load_network(&a.config, seed)?;
    let schedule = load_schedule(&a.schedule, Some(&cfg))?;
    let truth = a.truth.as_deref().map(|t| load_connectivity(t, cfg.n)).transpose()?;
    let clean = a.clean_schedule.as_deref().map(|p| load_schedule(p, Some(&cfg))).transpose()?;
    let origin: Option<OriginFile> = a.origin.as_deref().map(read_json).transpose()?;
    if !(a.nu > 0.0 && a.nu.is_finite()) {
        return Err(Error::Config(format!("--nu must be positive, got {}", a.nu)));
    }
    let (head, arg) = match a.selection.split_once(':') {
        Some((h, v)) => (h, Some(v)),
        None => (a.selection.as_str(), None),
    };
    let parse = |what: &str| -> Result<&str> {
        arg.ok_or_else(|| Error::Config(format!("selection {head} needs {what}, e.g. {head}:<{what}>")))
    };
    let selection = match head {
        "fixed" => Selection::Fixed(
            parse("k")?.parse().map_err(|e| Error::Config(format!("bad κ in {}: {e}", a.selection)))?,
        ),
        "rank" => Selection::Rank,
        "morozov-b" => {
            let noise_norm: f64 =
                parse("noise-norm")?.parse().map_err(|e| Error::Config(format!("bad noise norm: {e}")))?;
            Selection::MorozovStandard { noise_norm, nu: a.nu }
        }
        "morozov-a" => {
            let (Some(clean), Some(origin)) = (&clean, &origin) else {
                return Err(Error::Config("morozov-a needs --clean-schedule and --origin".into()));
            };
            Selection::MorozovAdjusted { clean, origin: &origin.origin, nu: a.nu }
        }
        "oracle" => {
            let truth = truth.as_ref().ok_or_else(|| Error::Config("oracle selection needs --truth".into()))?;
            Selection::MinFrobeniusOracle { truth }
        }
        other => return Err(Error::Config(format!("unknown selection {other:?}"))),
    };
    let (w, report) = reconstruct_connectivity(&schedule, &cfg, &selection)?;
    let unrecoverable = report.unrecoverable();
    if !unrecoverable.is_empty() {
        log::warn!("rows {unrecoverable:?} could not be recovered and are zero");
    }
    w.write_csv(BufWriter::new(fs::File::create(&a.out_connectivity)?))?;
    let relative_error = truth.as_ref().map(|t| w.relative_error(t));
    if let Some(e) = relative_error {
        println!("relative Frobenius error {e:.6}");
    }
    if let Some(p) = &a.out_report {
        write_json(p, &InvertReport { selection: &a.selection, relative_error, inversion: &report })?;
    }
    Ok(())
}

#[derive(Serialize)]
struct NeuronDiagnosis {
    neuron: usize,
    equations: usize,
    spectrum: Option<SpectrumDiagnostics>,
    fit: Option<DecayFit>,
    note: Option<String>,
}

fn diagnose(a: &DiagnoseArgs, seed: Option<u64>) -> Result<()> {
    let cfg = load_network(&a.config, seed)?;
    let schedule = load_schedule(&a.schedule, Some(&cfg))?;
    let neurons: Vec<usize> = if a.neuron == "all" {
        (0..cfg.n).collect()
    } else {
        let i: usize = a.neuron.parse().map_err(|e| Error::Config(format!("bad --neuron {:?}: {e}", a.neuron)))?;
        if i >= cfg.n {
            return Err(Error::Config(format!("--neuron {i} out of range for n = {}", cfg.n)));
        }
        vec![i]
    };
    let drive = build_drive(&schedule, &cfg.s0, cfg.tau_d)?;
    let mut out = Vec::new();
    for i in neurons {
        let equations = usable_onsets(&schedule, i).len();
        if equations == 0 {
            out.push(NeuronDiagnosis { neuron: i, equations, spectrum: None, fit: None, note: Some("no usable onsets".into()) });
            continue;
        }
        let sys = assemble_system(&schedule, &drive, &cfg.inputs[i], i, cfg.tau_d)?;
        let spectrum = spectrum_diagnostics(&sys, &cfg.s0, cfg.horizon)?;
        let (fit, note) = match fit_decay(&spectrum.sigma) {
            Ok(f) => (Some(f), None),
            Err(Error::InsufficientData(m)) => (None, Some(m)),
            Err(e) => return Err(e),
        };
        out.push(NeuronDiagnosis { neuron: i, equations, spectrum: Some(spectrum), fit, note });
    }
    let classes: Vec<_> = out.iter().filter_map(|d| d.fit.as_ref().map(|f| f.classification)).collect();
    let vote = majority_vote(&classes);
    println!("decay classification (majority of {} fits): {vote:?}", classes.len());
    if let Some(p) = &a.out {
        write_json(p, &serde_json::json!({ "majority": vote, "neurons": out }))?;
    }
    Ok(())
}

fn simulator(m: Method) -> SimulatorKind {
    match m {
        Method::Euler => SimulatorKind::Euler,
        Method::Exact => SimulatorKind::Exact,
    }
}

fn reproduce(a: &ReproduceArgs, seed: Option<u64>) -> Result<()> {
    fs::create_dir_all(&a.out_dir)?;
    if let Some(p) = &a.experiment {
        let mut cfg: ExperimentConfig = read_json(p)?;
        if let Some(s) = seed {
            cfg.seed = s;
        }
        cfg.output_dir = Some(a.out_dir.clone());
        let rep = run_experiment(&cfg)?;
        match (rep.mean_error, rep.stddev_error) {
            (Some(m), Some(s)) => println!("mean relative error {m:.4} ± {s:.4} over {} replicates", rep.errors().len()),
            _ => return Err(Error::Numerical("every replicate failed; see report.json".into())),
        }
        return Ok(());
    }
    if a.levels.iter().any(|l| !(0.0..=1.0).contains(l)) {
        return Err(Error::Config("levels must lie in [0, 1]".into()));
    }
    let opts = ReproduceOptions {
        sizes: a.sizes.clone(),
        levels: a.levels.clone(),
        replicates: a.replicates,
        seed: seed.unwrap_or(ReproduceOptions::default().seed),
        simulator: simulator(a.simulator),
    };
    let cells = reproduce_tables(&opts)?;
    write_tables_csv(&cells, &opts.levels, BufWriter::new(fs::File::create(a.out_dir.join("tables.csv"))?))?;
    write_cells_csv(&cells, BufWriter::new(fs::File::create(a.out_dir.join("cells.csv"))?))?;
    write_json(&a.out_dir.join("cells.json"), &serde_json::json!({ "options": opts, "cells": cells }))?;
    Ok(())
}

#[derive(Serialize)]
struct RhsNoise {
    neuron: usize,
    b: Vec<f64>,
    b_noisy: Vec<f64>,
    noise_norm: f64,
}

fn noise_apply(a: &NoiseApplyArgs, seed: Option<u64>) -> Result<()> {
    let seed = seed.unwrap_or(0);
    match a.target {
        Target::Intervals => {
            let schedule = load_schedule(&a.schedule, None)?;
            let spec = NoiseSpec::new(NoiseTarget::Intervals, a.level, seed);
            let p = perturb_schedule(&schedule, &spec)?;
            log::info!("ψ = {}", p.psi);
            write_json(&a.out, &p.schedule)?;
            if let Some(o) = &a.out_origin {
                write_json(o, &OriginFile { psi: p.psi, origin: p.origin })?;
            }
        }
        Target::Rhs => {
            let cfg_path = a.config.as_deref().ok_or_else(|| Error::Config("rhs noise needs --config".into()))?;
            let cfg = load_network(cfg_path, Some(seed))?;
            let schedule = load_schedule(&a.schedule, Some(&cfg))?;
            let drive = build_drive(&schedule, &cfg.s0, cfg.tau_d)?;
            let spec = NoiseSpec::new(NoiseTarget::Rhs, a.level, seed);
            let mut neurons = Vec::new();
            for i in (0..cfg.n).filter(|&i| !usable_onsets(&schedule, i).is_empty()) {
                let sys = assemble_system(&schedule, &drive, &cfg.inputs[i], i, cfg.tau_d)?;
                let (bd, noise_norm) = perturb_rhs(&sys, &spec)?;
                neurons.push(RhsNoise { neuron: i, b: sys.b.iter().copied().collect(), b_noisy: bd.iter().copied().collect(), noise_norm });
            }
            write_json(&a.out, &serde_json::json!({ "spec": spec, "rng": RNG_ALGORITHM, "neurons": neurons }))?;
        }
    }
    Ok(())
}

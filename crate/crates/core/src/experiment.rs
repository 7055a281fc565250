//! End-to-end synthetic experiments: generate `W`, simulate, extract the
//! schedule, add noise, reconstruct, score.

use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::NetworkConfig;
use crate::connectivity::{
    generate_nonsymmetric_connectivity, generate_symmetric_connectivity, ConnectivityMatrix,
};
use crate::diagnostics::{fit_decay, majority_vote, DecayClass};
use crate::drive::build_drive;
use crate::error::{Error, Result};
use crate::input::ExternalInput;
use crate::inverse::{
    assemble_system, assemble_system_at, solve_rows, usable_onsets, InversionReport, RowProblem,
    Rule, DEFAULT_NU,
};
use crate::noise::{perturb_rhs, perturb_schedule, NoiseSpec, NoiseTarget, RNG_ALGORITHM};
use crate::schedule::FiringSchedule;
use crate::sim::{extract_firing_schedule, simulate_euler_with, simulate_exact, Recording};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectivitySpec {
    Symmetric,
    Nonsymmetric,
    /// CSV file as written by [`ConnectivityMatrix::write_csv`].
    File(PathBuf),
}

impl ConnectivitySpec {
    pub fn build(&self, n: usize) -> Result<ConnectivityMatrix> {
        let w = match self {
            ConnectivitySpec::Symmetric => generate_symmetric_connectivity(n),
            ConnectivitySpec::Nonsymmetric => generate_nonsymmetric_connectivity(n),
            ConnectivitySpec::File(p) => {
                let f = fs::File::open(p)
                    .map_err(|e| Error::Config(format!("cannot open {}: {e}", p.display())))?;
                ConnectivityMatrix::read_csv(BufReader::new(f))?
            }
        };
        if w.n() != n {
            return Err(Error::Dimension(format!("connectivity is {0}×{0}, network n = {n}", w.n())));
        }
        Ok(w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimulatorKind {
    #[default]
    Euler,
    Exact,
}

/// How `κ` is chosen in an experiment. `Auto` picks the discrepancy
/// principle matching the noise target, or `κ = rank` without noise.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum SelectionSpec {
    #[default]
    Auto,
    Fixed { kappa: usize },
    Rank,
    MorozovStandard {
        #[serde(default = "default_nu")]
        nu: f64,
    },
    MorozovAdjusted {
        #[serde(default = "default_nu")]
        nu: f64,
    },
    /// Benchmark only: uses the true `W`.
    MinFrobeniusOracle,
}

fn default_nu() -> f64 {
    DEFAULT_NU
}

impl SelectionSpec {
    fn rule(&self, noise: Option<&NoiseSpec>) -> Rule {
        match *self {
            SelectionSpec::Auto => match noise.map(|n| n.target) {
                None => Rule::Rank,
                Some(NoiseTarget::Rhs) => Rule::MorozovStandard { nu: DEFAULT_NU },
                Some(NoiseTarget::Intervals) => Rule::MorozovAdjusted { nu: DEFAULT_NU },
            },
            SelectionSpec::Fixed { kappa } => Rule::Fixed(kappa),
            SelectionSpec::Rank => Rule::Rank,
            SelectionSpec::MorozovStandard { nu } => Rule::MorozovStandard { nu },
            SelectionSpec::MorozovAdjusted { nu } => Rule::MorozovAdjusted { nu },
            SelectionSpec::MinFrobeniusOracle => Rule::MinFrobeniusOracle,
        }
    }
}

/// Network parameters of an experiment. Missing `s0` is drawn from `U(0,1)`
/// afresh for every replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkTemplate {
    pub n: usize,
    #[serde(rename = "T")]
    pub horizon: f64,
    #[serde(default = "default_tau_d")]
    pub tau_d: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_input")]
    pub input: ExternalInput,
    /// Per-neuron inputs, overriding `input`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<ExternalInput>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s0: Option<Vec<f64>>,
}

fn default_tau_d() -> f64 {
    1.0
}

fn default_dt() -> f64 {
    1.0 / 500.0
}

fn default_input() -> ExternalInput {
    ExternalInput::constant(0.1)
}

impl NetworkTemplate {
    /// `dt = 1/500`, `τ_d = 1`, `B = 0.1`, with `T = 500` for `n ≤ 20` and
    /// `T = 2000` above.
    pub fn preset(n: usize) -> Self {
        Self {
            n,
            horizon: if n <= 20 { 500.0 } else { 2000.0 },
            tau_d: default_tau_d(),
            dt: default_dt(),
            input: default_input(),
            inputs: None,
            s0: None,
        }
    }

    pub fn instantiate(&self, rng: &mut impl Rng, seed: u64) -> Result<NetworkConfig> {
        let s0 = match &self.s0 {
            Some(s) => s.clone(),
            None => (0..self.n).map(|_| rng.random::<f64>()).collect(),
        };
        let inputs = self.inputs.clone().unwrap_or_else(|| vec![self.input.clone(); self.n]);
        let cfg = NetworkConfig {
            n: self.n,
            horizon: self.horizon,
            tau_d: self.tau_d,
            dt: self.dt,
            s0,
            inputs,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub network: NetworkTemplate,
    pub connectivity: ConnectivitySpec,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
    #[serde(default)]
    pub selection: SelectionSpec,
    #[serde(default)]
    pub simulator: SimulatorKind,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    /// Root seed; replicate seeds are derived from it.
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

fn default_replicates() -> usize {
    10
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if self.network.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if let Some(noise) = &self.noise {
            noise.validate()?;
            if noise.level > 1.0 {
                return Err(Error::Config(format!("noise level must lie in [0, 1], got {}", noise.level)));
            }
        }
        let rule = self.selection.rule(self.noise.as_ref());
        let target = self.noise.map(|n| n.target);
        match (rule, target) {
            (Rule::MorozovStandard { .. }, t) if t != Some(NoiseTarget::Rhs) => {
                Err(Error::Config("standard discrepancy principle needs rhs noise".into()))
            }
            (Rule::MorozovAdjusted { .. }, t) if t != Some(NoiseTarget::Intervals) => {
                Err(Error::Config("adjusted discrepancy principle needs interval noise".into()))
            }
            _ => Ok(()),
        }
    }

    /// Seed of replicate `r`.
    pub fn replicate_seed(&self, r: usize) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(r as u64);
        rng.next_u64()
    }
}

/// Per-neuron schedule statistics of one replicate, after noise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleStats {
    /// `K(i)`, usable equations per neuron.
    pub equations: Vec<usize>,
    /// Smallest onset gap per neuron.
    pub min_gap: Vec<Option<f64>>,
    pub median_interval: Option<f64>,
}

impl ScheduleStats {
    fn of(schedule: &FiringSchedule) -> Self {
        Self {
            equations: (0..schedule.n).map(|i| usable_onsets(schedule, i).len()).collect(),
            min_gap: (0..schedule.n).map(|i| schedule.min_onset_gap(i).map(|g| g.0)).collect(),
            median_interval: schedule.median_length(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplicateResult {
    pub index: usize,
    pub seed: u64,
    pub relative_error: Option<f64>,
    pub error: Option<String>,
    pub kappas: Vec<usize>,
    pub stats: Option<ScheduleStats>,
    /// Noise standard deviation `ψ`, if noise was applied.
    pub psi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inversion: Option<InversionReport>,
    #[serde(skip)]
    pub artifacts: Option<ReplicateArtifacts>,
}

/// In-memory outputs of a replicate, written to disk by [`write_artifacts`].
#[derive(Debug, Clone)]
pub struct ReplicateArtifacts {
    pub w_inv: ConnectivityMatrix,
    pub schedule: FiringSchedule,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timing {
    pub started_unix: f64,
    pub replicate_seconds: Vec<f64>,
    pub total_seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rng: String,
    pub oracle_selection: bool,
    pub replicates: Vec<ReplicateResult>,
    pub mean_error: Option<f64>,
    pub stddev_error: Option<f64>,
    /// Majority vote over per-neuron decay fits of the first successful replicate.
    pub decay_classification: Option<DecayClass>,
    /// Wall-clock data, kept apart so the rest of the report is reproducible.
    pub timing: Timing,
}

impl ExperimentReport {
    pub fn errors(&self) -> Vec<f64> {
        self.replicates.iter().filter_map(|r| r.relative_error).collect()
    }
}

/// Mean and sample standard deviation.
pub fn mean_stddev(v: &[f64]) -> Option<(f64, f64)> {
    if v.is_empty() {
        return None;
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    Some((mean, var.sqrt()))
}

fn run_replicate(
    cfg: &ExperimentConfig,
    w: &ConnectivityMatrix,
    index: usize,
    keep_inversion: bool,
) -> ReplicateResult {
    let seed = cfg.replicate_seed(index);
    let mut out = ReplicateResult {
        index,
        seed,
        relative_error: None,
        error: None,
        kappas: Vec::new(),
        stats: None,
        psi: None,
        inversion: None,
        artifacts: None,
    };
    match replicate_pipeline(cfg, w, seed) {
        Ok((w_inv, report, schedule, psi)) => {
            out.relative_error = Some(w_inv.relative_error(w));
            out.kappas = report.kappas();
            out.stats = Some(ScheduleStats::of(&schedule));
            out.psi = psi;
            out.inversion = keep_inversion.then_some(report);
            out.artifacts = Some(ReplicateArtifacts { w_inv, schedule });
        }
        Err(e) => {
            log::warn!("replicate {index} failed: {e}");
            out.error = Some(e.to_string());
        }
    }
    out
}

fn replicate_pipeline(
    cfg: &ExperimentConfig,
    w: &ConnectivityMatrix,
    seed: u64,
) -> Result<(ConnectivityMatrix, InversionReport, FiringSchedule, Option<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let net = cfg.network.instantiate(&mut rng, seed)?;
    let noise_seed = rng.next_u64();
    let traj = match cfg.simulator {
        SimulatorKind::Euler => simulate_euler_with(&net, w, Recording::None)?,
        SimulatorKind::Exact => simulate_exact(&net, w)?,
    };
    let clean = extract_firing_schedule(&traj);
    let rule = cfg.selection.rule(cfg.noise.as_ref());
    let noise = cfg.noise.map(|n| NoiseSpec { seed: n.seed ^ noise_seed, ..n });
    let n = net.n;
    let tau_d = net.tau_d;
    let clean_drive = build_drive(&clean, &net.s0, tau_d)?;

    let row_problem = |i: usize| -> Option<Result<RowProblem>> {
        if usable_onsets(&clean, i).is_empty() {
            return None;
        }
        Some(assemble_system(&clean, &clean_drive, &net.inputs[i], i, tau_d).and_then(|system| {
            match noise {
                Some(spec) if spec.target == NoiseTarget::Rhs => {
                    let (b, norm) = perturb_rhs(&system, &spec)?;
                    Ok(RowProblem { system: system.with_rhs(b)?, clean: None, noise_norm: Some(norm) })
                }
                _ => Ok(RowProblem { system, clean: None, noise_norm: None }),
            }
        }))
    };

    match noise {
        Some(spec) if spec.target == NoiseTarget::Intervals => {
            let perturbed = perturb_schedule(&clean, &spec)?;
            let noisy = &perturbed.schedule;
            let noisy_drive = build_drive(noisy, &net.s0, tau_d)?;
            let problems: Vec<Option<Result<RowProblem>>> = (0..n)
                .map(|i| {
                    if usable_onsets(noisy, i).is_empty() {
                        return None;
                    }
                    let onsets: Vec<f64> = noisy.intervals[i]
                        .iter()
                        .zip(&perturbed.origin[i])
                        .filter(|(iv, _)| iv.start > 0.0)
                        .map(|(_, &k)| clean.intervals[i][k].start)
                        .collect();
                    Some((|| {
                        let system = assemble_system(noisy, &noisy_drive, &net.inputs[i], i, tau_d)?;
                        let reference = assemble_system_at(&clean_drive, &net.inputs[i], i, tau_d, &onsets)?;
                        Ok(RowProblem { system, clean: Some(reference), noise_norm: None })
                    })())
                })
                .collect();
            let (w_inv, rep) = solve_rows(n, problems, rule, Some(w))?;
            Ok((w_inv, rep, perturbed.schedule, Some(perturbed.psi)))
        }
        _ => {
            let psi = noise.map(|_| net.inputs.iter().map(|b| b.max_abs()).fold(0.0, f64::max));
            let problems: Vec<_> = (0..n).map(row_problem).collect();
            let (w_inv, rep) = solve_rows(n, problems, rule, Some(w))?;
            let psi = psi.zip(noise).map(|(b, s)| b * s.level);
            Ok((w_inv, rep, clean, psi))
        }
    }
}

/// Runs all replicates (in parallel) and, when `output_dir` is set, writes
/// the report and per-replicate artifacts.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let started = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0);
    let clock = Instant::now();
    let w = cfg.connectivity.build(cfg.network.n)?;
    let timed: Vec<(ReplicateResult, f64)> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let t = Instant::now();
            let res = run_replicate(cfg, &w, r, true);
            (res, t.elapsed().as_secs_f64())
        })
        .collect();
    let (replicates, secs): (Vec<_>, Vec<_>) = timed.into_iter().unzip();
    let errs: Vec<f64> = replicates.iter().filter_map(|r| r.relative_error).collect();
    let ms = mean_stddev(&errs);
    let decay_classification = replicates
        .iter()
        .find_map(|r| r.inversion.as_ref())
        .map(classify_spectra);
    let report = ExperimentReport {
        config: cfg.clone(),
        rng: RNG_ALGORITHM.to_string(),
        oracle_selection: cfg.selection == SelectionSpec::MinFrobeniusOracle,
        replicates,
        mean_error: ms.map(|m| m.0),
        stddev_error: ms.map(|m| m.1),
        decay_classification,
        timing: Timing { started_unix: started, replicate_seconds: secs, total_seconds: clock.elapsed().as_secs_f64() },
    };
    if let Some(dir) = &cfg.output_dir {
        write_artifacts(dir, &w, &report)?;
    }
    Ok(report)
}

/// Majority vote of the per-neuron decay fits; rows too short to fit are skipped.
pub fn classify_spectra(report: &InversionReport) -> DecayClass {
    let classes: Vec<DecayClass> = report
        .neurons
        .iter()
        .filter_map(|r| fit_decay(&r.singular_values).ok())
        .map(|f| f.classification)
        .collect();
    majority_vote(&classes)
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let f = fs::File::create(path)?;
    let mut out = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// `neuron,m,sigma` rows, `m` starting at 1.
pub fn write_spectra_csv<W: Write>(report: &InversionReport, mut out: W) -> Result<()> {
    writeln!(out, "neuron,m,sigma")?;
    for r in &report.neurons {
        for (m, s) in r.singular_values.iter().enumerate() {
            writeln!(out, "{},{},{:.16e}", r.neuron, m + 1, s)?;
        }
    }
    Ok(())
}

/// Layout under `dir`: `report.json`, `errors.csv`, `connectivity_true.csv`,
/// and per replicate `replicate_XXX/{connectivity_inv.csv, schedule.json, spectra.csv}`.
pub fn write_artifacts(dir: &Path, w: &ConnectivityMatrix, report: &ExperimentReport) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_json(&dir.join("report.json"), report)?;
    w.write_csv(BufWriter::new(fs::File::create(dir.join("connectivity_true.csv"))?))?;
    let mut errors = BufWriter::new(fs::File::create(dir.join("errors.csv"))?);
    writeln!(errors, "replicate,seed,relative_error")?;
    for r in &report.replicates {
        let e = r.relative_error.map(|e| format!("{e:.16e}")).unwrap_or_default();
        writeln!(errors, "{},{},{}", r.index, r.seed, e)?;
        let Some(art) = &r.artifacts else { continue };
        let sub = dir.join(format!("replicate_{:03}", r.index));
        fs::create_dir_all(&sub)?;
        art.w_inv.write_csv(BufWriter::new(fs::File::create(sub.join("connectivity_inv.csv"))?))?;
        write_json(&sub.join("schedule.json"), &art.schedule)?;
        if let Some(inv) = &r.inversion {
            write_spectra_csv(inv, BufWriter::new(fs::File::create(sub.join("spectra.csv"))?))?;
        }
    }
    errors.flush()?;
    Ok(())
}

/// Grid cell of the error tables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableCell {
    pub connectivity: String,
    pub noise: NoiseTarget,
    pub n: usize,
    pub level: f64,
    pub mean: Option<f64>,
    pub stddev: Option<f64>,
    pub replicates: usize,
    pub failed: usize,
    /// `κ` chosen by the Frobenius oracle rather than a discrepancy principle.
    pub oracle: bool,
    /// Majority-vote decay class of the cell's spectra.
    pub decay: Option<DecayClass>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReproduceOptions {
    pub sizes: Vec<usize>,
    pub levels: Vec<f64>,
    pub replicates: usize,
    pub seed: u64,
    pub simulator: SimulatorKind,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self { sizes: vec![20, 100], levels: vec![0.01, 0.05, 0.10], replicates: 10, seed: 0, simulator: SimulatorKind::Euler }
    }
}

/// Cells where the reference results used the Frobenius oracle: symmetric
/// connectivity, rhs noise, `n = 100`, levels 1% and 5%.
pub fn uses_oracle(connectivity: &ConnectivitySpec, noise: NoiseTarget, n: usize, level: f64) -> bool {
    let low_level = [0.01, 0.05].iter().any(|l| (level - l).abs() < 1e-12);
    *connectivity == ConnectivitySpec::Symmetric && noise == NoiseTarget::Rhs && n == 100 && low_level
}

/// Experiment config of one table cell.
pub fn cell_config(
    connectivity: ConnectivitySpec,
    noise: NoiseTarget,
    n: usize,
    level: f64,
    replicates: usize,
    seed: u64,
    simulator: SimulatorKind,
) -> ExperimentConfig {
    let selection = if uses_oracle(&connectivity, noise, n, level) {
        SelectionSpec::MinFrobeniusOracle
    } else {
        SelectionSpec::Auto
    };
    ExperimentConfig {
        network: NetworkTemplate::preset(n),
        connectivity,
        noise: Some(NoiseSpec::new(noise, level, seed)),
        selection,
        simulator,
        replicates,
        seed,
        output_dir: None,
    }
}

/// Runs the symmetric / non-symmetric × rhs / intervals × sizes × levels grid.
pub fn reproduce_tables(opts: &ReproduceOptions) -> Result<Vec<TableCell>> {
    let mut cells = Vec::new();
    let mut cell_index = 0u64;
    for conn in [ConnectivitySpec::Symmetric, ConnectivitySpec::Nonsymmetric] {
        for target in [NoiseTarget::Rhs, NoiseTarget::Intervals] {
            for &n in &opts.sizes {
                for &level in &opts.levels {
                    let seed = opts.seed.wrapping_add(cell_index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                    cell_index += 1;
                    let cfg = cell_config(conn.clone(), target, n, level, opts.replicates, seed, opts.simulator);
                    let name = match conn {
                        ConnectivitySpec::Symmetric => "symmetric",
                        _ => "nonsymmetric",
                    };
                    log::info!("cell {name} {target:?} n={n} nl={level}");
                    let rep = run_experiment(&cfg)?;
                    cells.push(TableCell {
                        connectivity: name.to_string(),
                        noise: target,
                        n,
                        level,
                        mean: rep.mean_error,
                        stddev: rep.stddev_error,
                        replicates: opts.replicates,
                        failed: rep.replicates.iter().filter(|r| r.error.is_some()).count(),
                        oracle: rep.oracle_selection,
                        decay: rep.decay_classification,
                    });
                }
            }
        }
    }
    Ok(cells)
}

/// One row per (connectivity, noise, n), one mean and one stddev column per
/// level. Oracle-selected means carry a trailing `*`.
pub fn write_tables_csv<W: Write>(cells: &[TableCell], levels: &[f64], mut out: W) -> Result<()> {
    let mut header = vec!["connectivity".to_string(), "noise".into(), "n".into()];
    header.extend(levels.iter().map(|l| format!("mean_{}", fmt_level(*l))));
    header.extend(levels.iter().map(|l| format!("stddev_{}", fmt_level(*l))));
    writeln!(out, "{}", header.join(","))?;
    let mut keys: Vec<(String, NoiseTarget, usize)> = Vec::new();
    for c in cells {
        let k = (c.connectivity.clone(), c.noise, c.n);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    for (conn, noise, n) in keys {
        let find = |l: f64| {
            cells
                .iter()
                .find(|c| c.connectivity == conn && c.noise == noise && c.n == n && (c.level - l).abs() < 1e-12)
        };
        let mut row = vec![conn.clone(), noise_name(noise).to_string(), n.to_string()];
        for &l in levels {
            row.push(match find(l) {
                Some(TableCell { mean: Some(m), oracle, .. }) => format!("{m:.3}{}", if *oracle { "*" } else { "" }),
                _ => String::new(),
            });
        }
        for &l in levels {
            row.push(find(l).and_then(|c| c.stddev).map(|s| format!("{s:.3}")).unwrap_or_default());
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Long form: `connectivity,noise,n,level,mean,stddev,replicates,failed,oracle,decay`.
pub fn write_cells_csv<W: Write>(cells: &[TableCell], mut out: W) -> Result<()> {
    writeln!(out, "connectivity,noise,n,level,mean,stddev,replicates,failed,oracle,decay")?;
    for c in cells {
        let decay = match c.decay {
            Some(DecayClass::Mild) => "mild",
            Some(DecayClass::Severe) => "severe",
            Some(DecayClass::Inconclusive) => "inconclusive",
            None => "",
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            c.connectivity,
            noise_name(c.noise),
            c.n,
            c.level,
            c.mean.map(|v| format!("{v:.6}")).unwrap_or_default(),
            c.stddev.map(|v| format!("{v:.6}")).unwrap_or_default(),
            c.replicates,
            c.failed,
            c.oracle,
            decay
        )?;
    }
    Ok(())
}

fn noise_name(t: NoiseTarget) -> &'static str {
    match t {
        NoiseTarget::Rhs => "rhs",
        NoiseTarget::Intervals => "intervals",
    }
}

fn fmt_level(l: f64) -> String {
    format!("{}pct", (l * 100.0).round() as i64)
}

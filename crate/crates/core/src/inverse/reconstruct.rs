//! Row-by-row reconstruction of the whole connectivity matrix.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::NetworkConfig;
use crate::connectivity::ConnectivityMatrix;
use crate::drive::build_drive;
use crate::error::{Error, Result};
use crate::inverse::discrepancy::{
    argmin, choose_kappa_morozov_adjusted, choose_kappa_morozov_standard, oracle_errors_with,
};
use crate::inverse::system::{assemble_system, assemble_system_at, usable_onsets, NeuronSystem};
use crate::inverse::tsvd::{SelectionMethod, ThinSvd, TsvdSolution};
use crate::schedule::FiringSchedule;

/// How `κ` is chosen for each row.
#[derive(Debug, Clone)]
pub enum Selection<'a> {
    Fixed(usize),
    /// `κ` = numerical rank (pseudo-inverse solution).
    Rank,
    /// Right-hand side known to carry noise of norm `noise_norm` in every row system.
    MorozovStandard { noise_norm: f64, nu: f64 },
    /// The schedule being inverted is a perturbation of `clean`; `origin[i][k]`
    /// names the clean interval behind noisy interval `k` of neuron `i`.
    MorozovAdjusted { clean: &'a FiringSchedule, origin: &'a [Vec<usize>], nu: f64 },
    /// Single `κ` minimizing `‖W_κ − W_true‖_F`. Needs the true matrix, so it
    /// is only meaningful for synthetic benchmarks.
    MinFrobeniusOracle { truth: &'a ConnectivityMatrix },
}

/// Per-row rule once the systems are assembled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rule {
    Fixed(usize),
    Rank,
    MorozovStandard { nu: f64 },
    MorozovAdjusted { nu: f64 },
    MinFrobeniusOracle,
}

/// One row's inputs: the system to solve (its `b` may be noisy), plus what the
/// chosen rule needs.
#[derive(Debug, Clone)]
pub struct RowProblem {
    pub system: NeuronSystem,
    /// Noise-free system with the same rows, for the adjusted principle.
    pub clean: Option<NeuronSystem>,
    /// `‖b − b_δ‖₂`, for the standard principle.
    pub noise_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum RowStatus {
    Recovered,
    /// Neuron never fires, its row cannot be estimated.
    NotFiring,
    Failed(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NeuronReport {
    pub neuron: usize,
    #[serde(flatten)]
    pub status: RowStatus,
    /// `K(i)`, number of equations used.
    pub equations: usize,
    pub kappa: usize,
    pub rank: usize,
    /// Dimension of the null space of the row system.
    pub nullity: usize,
    pub underdetermined: bool,
    pub singular_values: Vec<f64>,
    pub residual_norms: Vec<f64>,
    pub method: Option<SelectionMethod>,
    pub criterion_satisfied: Option<bool>,
    pub clipped: bool,
}

impl NeuronReport {
    fn empty(neuron: usize, status: RowStatus) -> Self {
        Self {
            neuron,
            status,
            equations: 0,
            kappa: 0,
            rank: 0,
            nullity: 0,
            underdetermined: true,
            singular_values: Vec::new(),
            residual_norms: Vec::new(),
            method: None,
            criterion_satisfied: None,
            clipped: false,
        }
    }

    fn from_solution(sys: &NeuronSystem, sol: &TsvdSolution) -> Self {
        Self {
            neuron: sys.neuron,
            status: RowStatus::Recovered,
            equations: sys.rows(),
            kappa: sol.kappa,
            rank: sol.rank,
            nullity: sol.nullity(),
            underdetermined: sys.is_underdetermined(),
            singular_values: sol.singular_values.clone(),
            residual_norms: sol.residual_norms.clone(),
            method: Some(sol.method),
            criterion_satisfied: sol.criterion_satisfied,
            clipped: sol.clipped,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InversionReport {
    pub n: usize,
    pub neurons: Vec<NeuronReport>,
}

impl InversionReport {
    pub fn kappas(&self) -> Vec<usize> {
        self.neurons.iter().map(|r| r.kappa).collect()
    }

    pub fn unrecoverable(&self) -> Vec<usize> {
        self.neurons
            .iter()
            .filter(|r| r.status != RowStatus::Recovered)
            .map(|r| r.neuron)
            .collect()
    }

    /// Median `κ` over recovered rows.
    pub fn median_kappa(&self) -> Option<f64> {
        let mut k: Vec<f64> = self
            .neurons
            .iter()
            .filter(|r| r.status == RowStatus::Recovered)
            .map(|r| r.kappa as f64)
            .collect();
        crate::schedule::median(&mut k)
    }
}

fn solve_one(p: &RowProblem, rule: Rule) -> Result<TsvdSolution> {
    let sys = &p.system;
    match rule {
        Rule::Fixed(k) => {
            let svd = ThinSvd::new(&sys.a)?;
            Ok(TsvdSolution::build(&svd, &sys.b, k, SelectionMethod::FixedKappa, None))
        }
        Rule::Rank => {
            let svd = ThinSvd::new(&sys.a)?;
            Ok(TsvdSolution::build(&svd, &sys.b, svd.rank, SelectionMethod::FixedKappa, None))
        }
        Rule::MorozovStandard { nu } => {
            let delta = p
                .noise_norm
                .ok_or_else(|| Error::Config("standard discrepancy principle needs a noise norm".into()))?;
            choose_kappa_morozov_standard(sys, &sys.b, delta, nu)
        }
        Rule::MorozovAdjusted { nu } => {
            let clean = p
                .clean
                .as_ref()
                .ok_or_else(|| Error::Config("adjusted discrepancy principle needs the clean system".into()))?;
            choose_kappa_morozov_adjusted(sys, clean, nu)
        }
        Rule::MinFrobeniusOracle => unreachable!("oracle selection is global"),
    }
}

/// Solves every row problem and assembles the matrix. `problems[i]` is `None`
/// for neurons that never fire; their rows stay zero and are flagged.
pub fn solve_rows(
    n: usize,
    problems: Vec<Option<Result<RowProblem>>>,
    rule: Rule,
    truth: Option<&ConnectivityMatrix>,
) -> Result<(ConnectivityMatrix, InversionReport)> {
    if problems.len() != n {
        return Err(Error::Dimension(format!("{} row problems for n = {n}", problems.len())));
    }
    let mut w = ConnectivityMatrix::zeros(n);
    let mut reports: Vec<NeuronReport> = Vec::with_capacity(n);

    if rule == Rule::MinFrobeniusOracle {
        let truth =
            truth.ok_or_else(|| Error::Config("oracle selection requires the true matrix".into()))?;
        // per row: factorization and error curve over κ
        let rows: Vec<Option<Result<(ThinSvd, Vec<f64>, RowProblem)>>> = problems
            .into_par_iter()
            .enumerate()
            .map(|(i, p)| {
                p.map(|p| {
                    let p = p?;
                    let svd = ThinSvd::new(&p.system.a)?;
                    let errs = oracle_errors_with(&svd, &p.system.b, &truth.row(i));
                    Ok((svd, errs, p))
                })
            })
            .collect();
        let kmax = rows
            .iter()
            .flatten()
            .filter_map(|r| r.as_ref().ok())
            .map(|(svd, _, _)| svd.rank)
            .max()
            .unwrap_or(0);
        let totals: Vec<f64> = (0..=kmax)
            .map(|k| {
                rows.iter()
                    .flatten()
                    .filter_map(|r| r.as_ref().ok())
                    .map(|(svd, e, _)| e[k.min(svd.rank)].powi(2))
                    .sum()
            })
            .collect();
        let kappa = argmin(&totals);
        for (i, r) in rows.into_iter().enumerate() {
            match r {
                None => reports.push(NeuronReport::empty(i, RowStatus::NotFiring)),
                Some(Err(e)) => reports.push(NeuronReport::empty(i, RowStatus::Failed(e.to_string()))),
                Some(Ok((svd, _, p))) => {
                    let sol = TsvdSolution::build(
                        &svd,
                        &p.system.b,
                        kappa.min(svd.rank),
                        SelectionMethod::MinFrobeniusOracle,
                        Some(true),
                    );
                    w.set_row(i, &sol.w_row);
                    reports.push(NeuronReport::from_solution(&p.system, &sol));
                }
            }
        }
        return Ok((w, InversionReport { n, neurons: reports }));
    }

    let solved: Vec<(usize, Option<Result<(NeuronSystem, TsvdSolution)>>)> = problems
        .into_par_iter()
        .enumerate()
        .map(|(i, p)| {
            (i, p.map(|p| p.and_then(|p| solve_one(&p, rule).map(|s| (p.system, s)))))
        })
        .collect();
    for (i, r) in solved {
        match r {
            None => reports.push(NeuronReport::empty(i, RowStatus::NotFiring)),
            Some(Err(e)) => reports.push(NeuronReport::empty(i, RowStatus::Failed(e.to_string()))),
            Some(Ok((sys, sol))) => {
                w.set_row(i, &sol.w_row);
                reports.push(NeuronReport::from_solution(&sys, &sol));
            }
        }
    }
    Ok((w, InversionReport { n, neurons: reports }))
}

/// Drives from the schedule, one system per firing neuron, TSVD per row.
///
/// Rows of neurons outside `Γ` (no usable onsets) are zero and reported as
/// not firing. Assembly errors other than an empty system abort.
pub fn reconstruct_connectivity(
    schedule: &FiringSchedule,
    cfg: &NetworkConfig,
    selection: &Selection<'_>,
) -> Result<(ConnectivityMatrix, InversionReport)> {
    if schedule.n != cfg.n {
        return Err(Error::Dimension(format!("schedule n = {}, config n = {}", schedule.n, cfg.n)));
    }
    let n = cfg.n;
    let drive = build_drive(schedule, &cfg.s0, cfg.tau_d)?;
    let clean_drive = match selection {
        Selection::MorozovAdjusted { clean, origin, .. } => {
            if origin.len() != n {
                return Err(Error::Dimension("origin map must list every neuron".into()));
            }
            Some((build_drive(clean, &cfg.s0, cfg.tau_d)?, *clean, *origin))
        }
        _ => None,
    };

    let mut problems = Vec::with_capacity(n);
    for i in 0..n {
        if usable_onsets(schedule, i).is_empty() {
            problems.push(None);
            continue;
        }
        let system = assemble_system(schedule, &drive, &cfg.inputs[i], i, cfg.tau_d)?;
        let clean = match &clean_drive {
            Some((cd, cs, origin)) => {
                let onsets: Vec<f64> = schedule.intervals[i]
                    .iter()
                    .zip(&origin[i])
                    .filter(|(iv, _)| iv.start > 0.0)
                    .map(|(_, &k)| cs.intervals[i][k].start)
                    .collect();
                Some(assemble_system_at(cd, &cfg.inputs[i], i, cfg.tau_d, &onsets)?)
            }
            None => None,
        };
        let noise_norm = match selection {
            Selection::MorozovStandard { noise_norm, .. } => Some(*noise_norm),
            _ => None,
        };
        problems.push(Some(Ok(RowProblem { system, clean, noise_norm })));
    }
    let (rule, truth) = match selection {
        Selection::Fixed(k) => (Rule::Fixed(*k), None),
        Selection::Rank => (Rule::Rank, None),
        Selection::MorozovStandard { nu, .. } => (Rule::MorozovStandard { nu: *nu }, None),
        Selection::MorozovAdjusted { nu, .. } => (Rule::MorozovAdjusted { nu: *nu }, None),
        Selection::MinFrobeniusOracle { truth } => (Rule::MinFrobeniusOracle, Some(*truth)),
    };
    solve_rows(n, problems, rule, truth)
}

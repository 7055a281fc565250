//! Seeded measurement noise on the right-hand side or on interval endpoints.
//!
//! Each neuron draws from its own stream: ChaCha8 seeded with `spec.seed`,
//! stream number = neuron index. Adding neurons never changes the draws of
//! existing ones.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::inverse::NeuronSystem;
use crate::schedule::FiringSchedule;

pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha), stream = neuron index";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseTarget {
    Rhs,
    Intervals,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub target: NoiseTarget,
    /// Relative level `nl`, e.g. `0.05`.
    pub level: f64,
    #[serde(default)]
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(target: NoiseTarget, level: f64, seed: u64) -> Self {
        Self { target, level, seed }
    }

    /// Level finite and non-negative. Experiments additionally cap it at 1.
    pub fn validate(&self) -> Result<()> {
        if !(self.level >= 0.0 && self.level.is_finite()) {
            return Err(Error::Config(format!("noise level must be finite and ≥ 0, got {}", self.level)));
        }
        Ok(())
    }

    fn stream(&self, neuron: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(neuron as u64);
        rng
    }
}

/// `b_δ = b + ψ η` with `ψ = max|b|·nl`. Returns `b_δ` and `‖b − b_δ‖₂`.
pub fn perturb_rhs(sys: &NeuronSystem, spec: &NoiseSpec) -> Result<(DVector<f64>, f64)> {
    spec.validate()?;
    if spec.target != NoiseTarget::Rhs {
        return Err(Error::Config("perturb_rhs needs an rhs noise spec".into()));
    }
    let psi = sys.b.amax() * spec.level;
    let mut rng = spec.stream(sys.neuron);
    let eta: Vec<f64> = (0..sys.rows()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let delta = DVector::from_iterator(sys.rows(), eta.iter().map(|e| psi * e));
    let noise_norm = delta.norm();
    Ok((&sys.b + delta, noise_norm))
}

/// Perturbed schedule together with, for every surviving interval, the index
/// of the original interval it came from (the earliest one when perturbed
/// intervals were merged).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbedSchedule {
    pub schedule: FiringSchedule,
    pub origin: Vec<Vec<usize>>,
    pub psi: f64,
}

/// Endpoint jitter with `ψ = median Δt · nl`, pooled over all neurons.
///
/// Intervals whose original length is below `ψ` are discarded. Reversed
/// endpoints are swapped, overlaps merged, and the result clipped to `[0, T]`.
/// A start at exactly `0` (firing in progress) is not moved.
pub fn perturb_schedule(schedule: &FiringSchedule, spec: &NoiseSpec) -> Result<PerturbedSchedule> {
    spec.validate()?;
    if spec.target != NoiseTarget::Intervals {
        return Err(Error::Config("perturb_schedule needs an intervals noise spec".into()));
    }
    let psi = schedule.median_length().unwrap_or(0.0) * spec.level;
    let horizon = schedule.horizon;
    let mut intervals = Vec::with_capacity(schedule.n);
    let mut origin = Vec::with_capacity(schedule.n);
    for (i, list) in schedule.intervals.iter().enumerate() {
        let mut rng = spec.stream(i);
        let mut moved: Vec<(Interval, usize)> = Vec::with_capacity(list.len());
        for (k, iv) in list.iter().enumerate() {
            let e1: f64 = StandardNormal.sample(&mut rng);
            let e2: f64 = StandardNormal.sample(&mut rng);
            if psi > 0.0 && iv.length() < psi {
                continue;
            }
            let a = if iv.start == 0.0 { 0.0 } else { iv.start + psi * e1 };
            let b = iv.end + psi * e2;
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            let (a, b) = (a.max(0.0), b.min(horizon));
            if a > b || (psi > 0.0 && a == b) {
                continue;
            }
            moved.push((Interval::new(a, b), k));
        }
        moved.sort_by(|x, y| x.0.start.total_cmp(&y.0.start));
        let mut merged: Vec<(Interval, usize)> = Vec::with_capacity(moved.len());
        for (iv, k) in moved {
            match merged.last_mut() {
                Some((last, _)) if iv.start <= last.end => last.end = last.end.max(iv.end),
                _ => merged.push((iv, k)),
            }
        }
        origin.push(merged.iter().map(|m| m.1).collect());
        intervals.push(merged.into_iter().map(|m| m.0).collect());
    }
    let schedule = FiringSchedule::new(horizon, intervals)?;
    Ok(PerturbedSchedule { schedule, origin, psi })
}

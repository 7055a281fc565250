//! Closed-form synaptic drives for a known firing schedule.
//!
//! With the firing intervals fixed, each drive solves the decoupled linear
//! ODE `s' + s = Σ_k χ_{[a_k, b_k]}(t)` with history `s(t) = s0·e^{−t}` on
//! `(−τ_d, 0]`. The values at interval endpoints are propagated once so that
//! a point evaluation costs a binary search and one exponential.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::schedule::FiringSchedule;

#[derive(Debug, Clone)]
struct NeuronDrive {
    s0: f64,
    intervals: Vec<Interval>,
    at_start: Vec<f64>,
    at_end: Vec<f64>,
}

impl NeuronDrive {
    fn new(s0: f64, intervals: Vec<Interval>) -> Self {
        let mut at_start = Vec::with_capacity(intervals.len());
        let mut at_end = Vec::with_capacity(intervals.len());
        let (mut t, mut s) = (0.0, s0);
        for iv in &intervals {
            let sa = s * (-(iv.start - t)).exp();
            let sb = (sa - 1.0) * (-(iv.end - iv.start)).exp() + 1.0;
            at_start.push(sa);
            at_end.push(sb);
            t = iv.end;
            s = sb;
        }
        Self { s0, intervals, at_start, at_end }
    }

    fn eval(&self, t: f64) -> f64 {
        let k = self.intervals.partition_point(|iv| iv.start <= t);
        if k == 0 {
            return self.s0 * (-t).exp();
        }
        let iv = &self.intervals[k - 1];
        if t <= iv.end {
            (self.at_start[k - 1] - 1.0) * (-(t - iv.start)).exp() + 1.0
        } else {
            self.at_end[k - 1] * (-(t - iv.end)).exp()
        }
    }

    fn eval_superposition(&self, t: f64) -> f64 {
        let mut s = self.s0 * (-t).exp();
        for iv in &self.intervals {
            if t < iv.start {
                break;
            }
            s += if t <= iv.end {
                1.0 - (-(t - iv.start)).exp()
            } else {
                (iv.end - t).exp() - (iv.start - t).exp()
            };
        }
        s
    }
}

/// Evaluator for all `n` drives on `(−τ_d, T]`.
#[derive(Debug, Clone)]
pub struct ClosedFormDrive {
    neurons: Vec<NeuronDrive>,
    tau_d: f64,
    horizon: f64,
}

/// Builds the closed-form drives. Zero-length intervals are dropped since
/// they do not change the solution.
pub fn build_drive(schedule: &FiringSchedule, s0: &[f64], tau_d: f64) -> Result<ClosedFormDrive> {
    schedule.validate()?;
    if s0.len() != schedule.n {
        return Err(Error::Dimension(format!(
            "{} initial drives for {} neurons",
            s0.len(),
            schedule.n
        )));
    }
    let neurons = schedule
        .intervals
        .iter()
        .zip(s0)
        .map(|(ivs, &s)| {
            NeuronDrive::new(s, ivs.iter().filter(|iv| iv.end > iv.start).copied().collect())
        })
        .collect();
    Ok(ClosedFormDrive { neurons, tau_d, horizon: schedule.horizon })
}

impl ClosedFormDrive {
    pub fn n(&self) -> usize {
        self.neurons.len()
    }

    pub fn tau_d(&self) -> f64 {
        self.tau_d
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn s0(&self, neuron: usize) -> f64 {
        self.neurons[neuron].s0
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        let slack = 1e-12 * self.horizon.max(1.0);
        if t <= -self.tau_d - slack || t > self.horizon + slack || t.is_nan() {
            return Err(Error::Domain { time: t, lo: -self.tau_d, hi: self.horizon });
        }
        Ok(())
    }

    /// `s_neuron(t)`.
    pub fn evaluate(&self, neuron: usize, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(self.neurons[neuron].eval(t))
    }

    /// Same value as [`evaluate`](Self::evaluate), summed interval by interval
    /// as the superposition of each interval's response.
    pub fn evaluate_superposition(&self, neuron: usize, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(self.neurons[neuron].eval_superposition(t))
    }

    /// All drives at time `t`.
    pub fn state(&self, t: f64) -> Result<Vec<f64>> {
        self.check_domain(t)?;
        Ok(self.neurons.iter().map(|d| d.eval(t)).collect())
    }
}

/// Free-function form of [`ClosedFormDrive::evaluate`].
pub fn evaluate_drive(d: &ClosedFormDrive, neuron: usize, t: f64) -> Result<f64> {
    d.evaluate(neuron, t)
}

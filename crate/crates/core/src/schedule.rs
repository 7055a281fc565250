//! Per-neuron firing intervals and the distance between two schedules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalSet};

/// Firing intervals of every neuron over `[0, T]`.
///
/// An interval starting exactly at `0` means the neuron was already firing
/// when the observation window opened; its start is not a threshold crossing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiringSchedule {
    pub n: usize,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub intervals: Vec<Vec<Interval>>,
}

impl FiringSchedule {
    pub fn empty(n: usize, horizon: f64) -> Self {
        Self { n, horizon, intervals: vec![Vec::new(); n] }
    }

    pub fn new(horizon: f64, intervals: Vec<Vec<Interval>>) -> Result<Self> {
        let s = Self { n: intervals.len(), horizon, intervals };
        s.validate()?;
        Ok(s)
    }

    /// Checks ordering, disjointness, non-negative lengths and `[0, T]` bounds.
    pub fn validate(&self) -> Result<()> {
        if self.intervals.len() != self.n {
            return Err(Error::Dimension(format!(
                "schedule lists {} neurons, n = {}",
                self.intervals.len(),
                self.n
            )));
        }
        let slack = 1e-12 * self.horizon.max(1.0);
        for (i, ivs) in self.intervals.iter().enumerate() {
            for iv in ivs {
                if !(iv.start.is_finite() && iv.end.is_finite()) || iv.end < iv.start {
                    return Err(Error::Config(format!("neuron {i}: malformed interval {iv:?}")));
                }
                if iv.start < 0.0 || iv.end > self.horizon + slack {
                    return Err(Error::Config(format!(
                        "neuron {i}: interval {iv:?} outside [0, {}]",
                        self.horizon
                    )));
                }
            }
            if ivs.windows(2).any(|w| w[1].start <= w[0].end) {
                return Err(Error::Config(format!(
                    "neuron {i}: intervals must be disjoint and increasing"
                )));
            }
        }
        Ok(())
    }

    /// `K(i)`.
    pub fn count(&self, i: usize) -> usize {
        self.intervals[i].len()
    }

    /// Indices of neurons that fire at least once (`Γ`).
    pub fn gamma(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.intervals[i].is_empty()).collect()
    }

    pub fn onsets(&self, i: usize) -> Vec<f64> {
        self.intervals[i].iter().map(|iv| iv.start).collect()
    }

    pub fn as_set(&self, i: usize) -> IntervalSet {
        IntervalSet::from_spans(self.intervals[i].iter().copied())
    }

    pub fn total_events(&self) -> usize {
        self.intervals.iter().map(Vec::len).sum()
    }

    /// `sup_i d_Δ(∪_k I_i^k, ∪_k Ĩ_i^k)`.
    pub fn distance(&self, other: &FiringSchedule) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "schedules have {} and {} neurons",
                self.n, other.n
            )));
        }
        Ok((0..self.n)
            .map(|i| self.as_set(i).symmetric_difference_measure(&other.as_set(i)))
            .fold(0.0, f64::max))
    }

    /// Median interval length pooled over all neurons, `None` if no intervals.
    pub fn median_length(&self) -> Option<f64> {
        let mut lens: Vec<f64> = self.intervals.iter().flatten().map(Interval::length).collect();
        median(&mut lens)
    }

    /// Smallest gap between consecutive onsets of neuron `i`, with the index of
    /// the earlier onset.
    pub fn min_onset_gap(&self, i: usize) -> Option<(f64, usize)> {
        let on = self.onsets(i);
        on.windows(2)
            .enumerate()
            .map(|(k, w)| (w[1] - w[0], k))
            .min_by(|a, b| a.0.total_cmp(&b.0))
    }
}

pub(crate) fn median(v: &mut [f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

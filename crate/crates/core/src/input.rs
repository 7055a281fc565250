//! External inputs `B_i(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    Hold,
    Linear,
}

/// A constructive external input signal on `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ExternalInput {
    Constant { value: f64 },
    /// `values[k]` holds on `[breakpoints[k], breakpoints[k + 1])`, the last
    /// piece extends to the horizon.
    PiecewiseConstant { breakpoints: Vec<f64>, values: Vec<f64> },
    Tabulated { times: Vec<f64>, values: Vec<f64>, interpolation: Interpolation },
}

impl ExternalInput {
    pub fn constant(value: f64) -> Self {
        ExternalInput::Constant { value }
    }

    pub fn validate(&self, horizon: f64) -> Result<()> {
        match self {
            ExternalInput::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::Config("constant input must be finite".into()));
                }
            }
            ExternalInput::PiecewiseConstant { breakpoints, values } => {
                if breakpoints.is_empty() || breakpoints.len() != values.len() {
                    return Err(Error::Config(
                        "piecewise-constant input needs one value per breakpoint".into(),
                    ));
                }
                if breakpoints[0] != 0.0 {
                    return Err(Error::Config("first breakpoint must be 0".into()));
                }
                if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Config("breakpoints must be strictly ascending".into()));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Config("input values must be finite".into()));
                }
            }
            ExternalInput::Tabulated { times, values, .. } => {
                if times.is_empty() || times.len() != values.len() {
                    return Err(Error::Config("tabulated input needs matching times/values".into()));
                }
                if times.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Config("tabulated grid must be strictly ascending".into()));
                }
                if times[0] > 0.0 || *times.last().unwrap() < horizon {
                    return Err(Error::Config(format!(
                        "tabulated grid [{}, {}] does not cover [0, {horizon}]",
                        times[0],
                        times.last().unwrap()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            ExternalInput::Constant { value } => *value,
            ExternalInput::PiecewiseConstant { breakpoints, values } => {
                let k = breakpoints.partition_point(|b| *b <= t);
                values[k.saturating_sub(1)]
            }
            ExternalInput::Tabulated { times, values, interpolation } => {
                let k = times.partition_point(|x| *x <= t);
                if k == 0 {
                    return values[0];
                }
                if k == times.len() {
                    return values[k - 1];
                }
                match interpolation {
                    Interpolation::Hold => values[k - 1],
                    Interpolation::Linear => {
                        let (t0, t1) = (times[k - 1], times[k]);
                        let (v0, v1) = (values[k - 1], values[k]);
                        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
                    }
                }
            }
        }
    }

    /// Times in `(0, horizon)` where the input may jump.
    pub fn discontinuities(&self) -> Vec<f64> {
        match self {
            ExternalInput::Constant { .. } => Vec::new(),
            ExternalInput::PiecewiseConstant { breakpoints, values } => (1..breakpoints.len())
                .filter(|&k| values[k] != values[k - 1])
                .map(|k| breakpoints[k])
                .collect(),
            ExternalInput::Tabulated { times, values, interpolation } => match interpolation {
                Interpolation::Linear => Vec::new(),
                Interpolation::Hold => (1..times.len())
                    .filter(|&k| values[k] != values[k - 1])
                    .map(|k| times[k])
                    .collect(),
            },
        }
    }

    /// Whether the input is continuous at `t`, up to a relative tolerance on `t`.
    pub fn is_continuous_at(&self, t: f64, tol: f64) -> bool {
        self.discontinuities().iter().all(|d| (d - t).abs() > tol)
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            ExternalInput::Constant { value } => value.abs(),
            ExternalInput::PiecewiseConstant { values, .. }
            | ExternalInput::Tabulated { values, .. } => {
                values.iter().fold(0.0, |m, v| m.max(v.abs()))
            }
        }
    }

    pub fn is_piecewise_constant(&self) -> bool {
        !matches!(self, ExternalInput::Tabulated { .. })
    }
}

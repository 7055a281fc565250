//! Measures of the near-threshold sets `β_γ^i(T) = {t ∈ [0,T] : |G_i(t − τ_d) + B_i(t)| ≤ 1/γ}`.

use serde::{Deserialize, Serialize};

use crate::config::NetworkConfig;
use crate::connectivity::ConnectivityMatrix;
use crate::error::{Error, Result};
use crate::sim::exact::window_coefficients;
use crate::sim::trajectory::{ExpTrajectory, Trajectory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaEstimate {
    pub gamma: u64,
    /// Estimated `|β_γ^i(T)|` per neuron.
    pub measure: Vec<f64>,
    /// Sampling step for grid trajectories; `None` when computed in closed form.
    pub sample_dt: Option<f64>,
}

impl BetaEstimate {
    pub fn max(&self) -> f64 {
        self.measure.iter().copied().fold(0.0, f64::max)
    }
}

pub fn estimate_beta_measure(
    traj: &Trajectory,
    cfg: &NetworkConfig,
    w: &ConnectivityMatrix,
    gamma: u64,
    sample_dt: f64,
) -> Result<BetaEstimate> {
    if gamma == 0 {
        return Err(Error::Config("gamma must be a positive integer".into()));
    }
    if traj.n() != w.n() || cfg.n != w.n() {
        return Err(Error::Dimension("trajectory, config and connectivity disagree on n".into()));
    }
    let eps = 1.0 / gamma as f64;
    match traj {
        Trajectory::PiecewiseExp(e) => Ok(BetaEstimate {
            gamma,
            measure: exact_measures(e, cfg, w, eps),
            sample_dt: None,
        }),
        Trajectory::Grid(g) => {
            if !(sample_dt > 0.0) || sample_dt > g.dt * (1.0 + 1e-12) {
                return Err(Error::Config(format!(
                    "sample_dt must lie in (0, dt = {}], got {sample_dt}",
                    g.dt
                )));
            }
            if g.sample_index.is_empty() {
                return Err(Error::Config("grid trajectory was recorded without samples".into()));
            }
            let n = w.n();
            let wm = w.matrix();
            let count = (cfg.horizon / sample_dt).floor() as usize;
            let mut hits = vec![0usize; n];
            let mut delayed = vec![0.0; n];
            for k in 0..=count {
                let t = k as f64 * sample_dt;
                for (j, d) in delayed.iter_mut().enumerate() {
                    *d = g.drive_at(j, t - cfg.tau_d).unwrap_or(0.0);
                }
                for i in 0..n {
                    let arg: f64 =
                        (0..n).map(|j| wm[(i, j)] * delayed[j]).sum::<f64>() + cfg.inputs[i].value(t);
                    if arg.abs() <= eps {
                        hits[i] += 1;
                    }
                }
            }
            Ok(BetaEstimate {
                gamma,
                measure: hits.into_iter().map(|h| h as f64 * sample_dt).collect(),
                sample_dt: Some(sample_dt),
            })
        }
    }
}

/// Measure of `{t ∈ [lo, hi] : |amp·e^{−(t − t0)} + offset| ≤ eps}`.
pub(crate) fn band_measure(amp: f64, offset: f64, t0: f64, lo: f64, hi: f64, eps: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    if amp == 0.0 {
        return if offset.abs() <= eps { hi - lo } else { 0.0 };
    }
    // x = e^{−(t − t0)} is decreasing in t
    let (x1, x2) = ((-eps - offset) / amp, (eps - offset) / amp);
    let (x_lo, x_hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    if x_hi <= 0.0 {
        return 0.0;
    }
    let t_from = t0 - x_hi.ln();
    let t_to = if x_lo <= 0.0 { f64::INFINITY } else { t0 - x_lo.ln() };
    (t_to.min(hi) - t_from.max(lo)).max(0.0)
}

fn exact_measures(e: &ExpTrajectory, cfg: &NetworkConfig, w: &ConnectivityMatrix, eps: f64) -> Vec<f64> {
    let n = e.n;
    let tau = e.tau_d;
    let horizon = e.horizon;
    let breaks = e.breakpoints();
    let mut input_breaks: Vec<f64> = cfg
        .inputs
        .iter()
        .flat_map(|b| b.discontinuities())
        .filter(|&t| t > 0.0 && t < horizon)
        .collect();
    input_breaks.sort_by(f64::total_cmp);
    input_breaks.dedup();

    let mut total = vec![0.0; n];
    for (k, &p) in breaks.iter().enumerate() {
        let lo = (p + tau).max(0.0);
        let hi = breaks.get(k + 1).map_or(horizon, |&q| (q + tau).min(horizon));
        if hi <= lo {
            continue;
        }
        let s: Vec<f64> = (0..n).map(|j| e.drive_at(j, p)).collect();
        let u: Vec<bool> = (0..n).map(|j| e.segment_at(j, p).firing).collect();
        let win = window_coefficients(w, &s, &u, p, p);
        let mut cuts = vec![lo];
        cuts.extend(input_breaks.iter().copied().filter(|&b| b > lo && b < hi));
        cuts.push(hi);
        for piece in cuts.windows(2) {
            let (a, b) = (piece[0], piece[1]);
            let mid = 0.5 * (a + b);
            for i in 0..n {
                let offset = win.c[i] + cfg.inputs[i].value(mid);
                total[i] += band_measure(win.a[i], offset, p + tau, a, b, eps);
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_measure_oracle() {
        // brute force over a fine grid
        let (amp, off, t0, lo, hi, eps) = (2.0, -0.5, 0.0, 0.0, 4.0, 0.1);
        let m = band_measure(amp, off, t0, lo, hi, eps);
        let steps = 2_000_000;
        let h = (hi - lo) / steps as f64;
        let brute = (0..steps)
            .filter(|&k| {
                let t = lo + (k as f64 + 0.5) * h;
                (amp * (-(t - t0)).exp() + off).abs() <= eps
            })
            .count() as f64
            * h;
        assert!((m - brute).abs() < 1e-5, "{m} vs {brute}");
        assert_eq!(band_measure(0.0, 0.05, 0.0, 1.0, 3.0, 0.1), 2.0);
        assert_eq!(band_measure(0.0, 0.5, 0.0, 1.0, 3.0, 0.1), 0.0);
        assert_eq!(band_measure(-1.0, -1.0, 0.0, 0.0, 5.0, 0.1), 0.0);
    }
}

//! Event-driven simulation with closed-form segments.
//!
//! Between regime changes every drive is `(s_a − u)e^{−(t − a)} + u`, so the
//! network input `G_i(τ) = Σ_j W_ij s_j(τ)` is `a_i e^{−(τ − r)} + c_i` on each
//! window between consecutive change times. The firing argument of neuron
//! `i` at time `t` reads `G_i(t − τ_d)`, which is therefore monotone on every
//! delayed window and has at most one zero there, found in closed form.

use std::collections::VecDeque;

use crate::config::NetworkConfig;
use crate::connectivity::ConnectivityMatrix;
use crate::error::{Error, Result};
use crate::input::ExternalInput;
use crate::interval::Interval;
use crate::sim::trajectory::{ExpTrajectory, Segment, Trajectory};

pub const DEFAULT_EVENT_CAP: usize = 10_000_000;

#[derive(Debug, Clone, Copy)]
pub struct ExactOptions {
    pub event_cap: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self { event_cap: DEFAULT_EVENT_CAP }
    }
}

/// `G(τ) = a e^{−(τ − reference)} + c` for `τ ∈ [start, next window start)`.
#[derive(Debug, Clone)]
pub(crate) struct DriveWindow {
    pub start: f64,
    pub reference: f64,
    pub a: Vec<f64>,
    pub c: Vec<f64>,
}

/// Coefficients of `G = W s` on a window where drive `j` is
/// `(s_j − u_j)e^{−(τ − reference)} + u_j`.
pub(crate) fn window_coefficients(
    w: &ConnectivityMatrix,
    s_at_reference: &[f64],
    u: &[bool],
    start: f64,
    reference: f64,
) -> DriveWindow {
    let n = w.n();
    let wm = w.matrix();
    let mut a = vec![0.0; n];
    let mut c = vec![0.0; n];
    for i in 0..n {
        let (mut ai, mut ci) = (0.0, 0.0);
        for j in 0..n {
            let uj = if u[j] { 1.0 } else { 0.0 };
            ai += wm[(i, j)] * (s_at_reference[j] - uj);
            ci += wm[(i, j)] * uj;
        }
        a[i] = ai;
        c[i] = ci;
    }
    DriveWindow { start, reference, a, c }
}

fn constant_pieces(input: &ExternalInput) -> Result<Vec<(f64, f64)>> {
    match input {
        ExternalInput::Constant { value } => Ok(vec![(0.0, *value)]),
        ExternalInput::PiecewiseConstant { breakpoints, values } => {
            Ok(breakpoints.iter().copied().zip(values.iter().copied()).collect())
        }
        ExternalInput::Tabulated { .. } => {
            Err(Error::UnsupportedInput("tabulated inputs require the Euler simulator".into()))
        }
    }
}

pub fn simulate_exact(cfg: &NetworkConfig, w: &ConnectivityMatrix) -> Result<Trajectory> {
    simulate_exact_with(cfg, w, ExactOptions::default())
}

pub fn simulate_exact_with(
    cfg: &NetworkConfig,
    w: &ConnectivityMatrix,
    opts: ExactOptions,
) -> Result<Trajectory> {
    cfg.validate()?;
    if cfg.n != w.n() {
        return Err(Error::Dimension(format!("config n = {}, connectivity n = {}", cfg.n, w.n())));
    }
    let n = cfg.n;
    let tau = cfg.tau_d;
    let horizon = cfg.horizon;
    let pieces: Vec<Vec<(f64, f64)>> =
        cfg.inputs.iter().map(constant_pieces).collect::<Result<_>>()?;
    // all input breakpoints in (0, T), merged over neurons
    let mut input_breaks: Vec<f64> = pieces
        .iter()
        .flat_map(|p| p.iter().skip(1).map(|&(t, _)| t))
        .filter(|&t| t > 0.0 && t < horizon)
        .collect();
    input_breaks.sort_by(f64::total_cmp);
    input_breaks.dedup();
    let input_at = |i: usize, t: f64| -> f64 {
        let p = &pieces[i];
        let k = p.partition_point(|&(b, _)| b <= t);
        p[k.saturating_sub(1)].1
    };

    let wm = w.matrix();
    let row_abs_max = (0..n)
        .map(|i| (0..n).map(|j| wm[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let input_max = cfg.inputs.iter().map(ExternalInput::max_abs).fold(0.0, f64::max);
    let arg_tol = 1e-12 * (1.0 + row_abs_max + input_max);
    let time_tol = |t: f64| 1e-12 * t.abs().max(1.0);

    let mut u = vec![false; n];
    let mut segments: Vec<Vec<Segment>> = (0..n)
        .map(|j| vec![Segment { t_start: 0.0, t_end: horizon, firing: false, s_start: cfg.s0[j] }])
        .collect();
    let mut intervals: Vec<Vec<Interval>> = vec![Vec::new(); n];
    let mut onset: Vec<Option<f64>> = vec![None; n];

    let mut windows: VecDeque<DriveWindow> = VecDeque::new();
    windows.push_back(window_coefficients(w, &cfg.s0, &u, -tau, 0.0));

    let mut events = 0usize;
    let mut t_cur = 0.0f64;
    let mut entering = true;
    let mut next_break = 0usize;

    let state_at = |segments: &Vec<Vec<Segment>>, t: f64| -> Vec<f64> {
        segments.iter().map(|segs| segs.last().unwrap().eval(t)).collect()
    };

    loop {
        while windows.len() > 1 && windows[1].start + tau <= t_cur {
            windows.pop_front();
        }
        while next_break < input_breaks.len() && input_breaks[next_break] <= t_cur {
            next_break += 1;
        }
        let mut window_end = horizon;
        if let Some(wn) = windows.get(1) {
            window_end = window_end.min(wn.start + tau);
        }
        if let Some(&b) = input_breaks.get(next_break) {
            window_end = window_end.min(b);
        }
        let win = windows.front().unwrap().clone();
        let r = win.reference + tau;

        let mut flipped: Vec<usize> = Vec::new();
        if entering {
            for i in 0..n {
                let arg = win.a[i] * (-(t_cur - r)).exp() + win.c[i] + input_at(i, t_cur);
                let rising = win.a[i] < 0.0;
                let falling = win.a[i] > 0.0;
                let want = if arg > arg_tol {
                    true
                } else if arg < -arg_tol {
                    false
                } else {
                    !falling
                };
                if want != u[i] {
                    flipped.push(i);
                } else if !u[i] && arg >= -arg_tol && !rising && t_cur > 0.0 {
                    // tangential touch: zero-length firing, dynamics unchanged
                    intervals[i].push(Interval::new(t_cur, t_cur));
                    events += 1;
                }
            }
            entering = false;
        } else {
            let mut best = f64::INFINITY;
            let mut roots = vec![f64::INFINITY; n];
            for i in 0..n {
                let a = win.a[i];
                let d = win.c[i] + input_at(i, t_cur);
                let moving_out = if u[i] { a > 0.0 && d < 0.0 } else { a < 0.0 && d > 0.0 };
                if !moving_out {
                    continue;
                }
                let t_star = r + (-a / d).ln();
                if t_star > t_cur && t_star < window_end {
                    roots[i] = t_star;
                    best = best.min(t_star);
                }
            }
            if best.is_finite() {
                let tol = time_tol(best);
                flipped.extend((0..n).filter(|&i| roots[i] <= best + tol));
                t_cur = best;
            } else {
                t_cur = window_end;
                entering = true;
                if t_cur >= horizon {
                    break;
                }
                continue;
            }
        }

        if flipped.is_empty() {
            continue;
        }
        events += flipped.len();
        if events > opts.event_cap {
            return Err(Error::EventExplosion { cap: opts.event_cap, time: t_cur });
        }
        let s_now = state_at(&segments, t_cur);
        for &i in &flipped {
            u[i] = !u[i];
            let seg = segments[i].last_mut().unwrap();
            seg.t_end = t_cur;
            segments[i].push(Segment {
                t_start: t_cur,
                t_end: horizon,
                firing: u[i],
                s_start: s_now[i],
            });
            if u[i] {
                onset[i] = Some(t_cur);
            } else if let Some(a) = onset[i].take() {
                intervals[i].push(Interval::new(a, t_cur));
            }
        }
        if let Some(j) = s_now.iter().position(|v| !v.is_finite()) {
            return Err(Error::Divergence { time: t_cur, neuron: j });
        }
        windows.push_back(window_coefficients(w, &s_now, &u, t_cur, t_cur));
    }

    for i in 0..n {
        if let Some(a) = onset[i].take() {
            intervals[i].push(Interval::new(a, horizon));
        }
        segments[i].last_mut().unwrap().t_end = horizon;
    }

    Ok(Trajectory::PiecewiseExp(ExpTrajectory {
        n,
        tau_d: tau,
        horizon,
        segments,
        intervals,
        events,
    }))
}

//! Explicit Euler integration of the delayed Heaviside network.
//!
//! Step rule: `s_{m+1} = s_m + dt·(−s_m + Φ(G(t_m − τ_d) + B(t_m)))` with
//! `G = W s`. The network input `G` is advanced alongside `s` using
//! `G_{m+1} = (1 − dt)·G_m + dt·W u_m`, where `W u` only changes when a neuron
//! switches; both are rebuilt from scratch periodically.

use crate::config::NetworkConfig;
use crate::connectivity::ConnectivityMatrix;
use crate::error::{Error, Result};
use crate::sim::trajectory::{GridTrajectory, Recording, Trajectory};

const RESYNC_EVERY: usize = 1024;

/// Heaviside with `Φ(0) = 1`.
#[inline]
pub fn heaviside(x: f64) -> bool {
    x >= 0.0
}

pub fn simulate_euler(cfg: &NetworkConfig, w: &ConnectivityMatrix) -> Result<Trajectory> {
    simulate_euler_with(cfg, w, Recording::Full)
}

pub fn simulate_euler_with(
    cfg: &NetworkConfig,
    w: &ConnectivityMatrix,
    recording: Recording,
) -> Result<Trajectory> {
    cfg.validate()?;
    if cfg.n != w.n() {
        return Err(Error::Dimension(format!("config n = {}, connectivity n = {}", cfg.n, w.n())));
    }
    let n = cfg.n;
    let dt = cfg.dt;
    let delay = cfg.delay_steps()?;
    let steps = cfg.horizon_steps();
    let wm = w.matrix();

    let matvec = |x: &[f64], out: &mut [f64]| {
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..n).map(|j| wm[(i, j)] * x[j]).sum();
        }
    };

    let mut s = cfg.s0.clone();
    let mut g0 = vec![0.0; n];
    matvec(&s, &mut g0);
    // ring buffer of G_m for the last `delay + 1` steps
    let slots = delay + 1;
    let mut ring = vec![0.0; slots * n];
    ring[..n].copy_from_slice(&g0);
    let mut g = g0.clone();

    let mut u = vec![false; n];
    let mut wu = vec![0.0; n];
    let mut firing_runs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut run_start: Vec<Option<usize>> = vec![None; n];

    let stride = match recording {
        Recording::Full => Some(1),
        Recording::Every(k) => Some(k.max(1)),
        Recording::None => None,
    };
    let mut sample_index = Vec::new();
    let mut samples = Vec::new();
    let mut uf = vec![0.0; n];

    for m in 0..=steps {
        let t = m as f64 * dt;
        if let Some(k) = stride {
            if m % k == 0 || m == steps {
                sample_index.push(m);
                samples.extend_from_slice(&s);
            }
        }

        let hist = m < delay;
        let scale = (-(t - cfg.tau_d)).exp();
        let base = ((m + 1) % slots) * n;
        for i in 0..n {
            let delayed = if hist { g0[i] * scale } else { ring[base + i] };
            let fire = heaviside(delayed + cfg.inputs[i].value(t));
            if fire != u[i] {
                let sign = if fire { 1.0 } else { -1.0 };
                for (r, wr) in wu.iter_mut().enumerate() {
                    *wr += sign * wm[(r, i)];
                }
                u[i] = fire;
            }
            match (fire, run_start[i]) {
                (true, None) => run_start[i] = Some(m),
                (false, Some(a)) => {
                    firing_runs[i].push((a, m - 1));
                    run_start[i] = None;
                }
                _ => {}
            }
        }
        if m == steps {
            break;
        }

        for i in 0..n {
            let ui = if u[i] { 1.0 } else { 0.0 };
            s[i] += dt * (ui - s[i]);
            g[i] = (1.0 - dt) * g[i] + dt * wu[i];
        }
        if (m + 1) % RESYNC_EVERY == 0 {
            if let Some(j) = s.iter().position(|v| !v.is_finite()) {
                return Err(Error::Divergence { time: t + dt, neuron: j });
            }
            matvec(&s, &mut g);
            for (f, &b) in uf.iter_mut().zip(&u) {
                *f = if b { 1.0 } else { 0.0 };
            }
            matvec(&uf, &mut wu);
        }
        ring[base..base + n].copy_from_slice(&g);
    }
    if let Some(j) = s.iter().position(|v| !v.is_finite()) {
        return Err(Error::Divergence { time: cfg.horizon, neuron: j });
    }
    for i in 0..n {
        if let Some(a) = run_start[i] {
            firing_runs[i].push((a, steps));
        }
    }

    Ok(Trajectory::Grid(GridTrajectory {
        n,
        dt,
        tau_d: cfg.tau_d,
        steps,
        s0: cfg.s0.clone(),
        sample_index,
        samples,
        firing_runs,
    }))
}

use crate::interval::Interval;
use crate::schedule::FiringSchedule;

/// What an Euler run keeps of the state history.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recording {
    /// Every grid sample.
    Full,
    /// Every `k`-th grid sample (plus the last one).
    Every(usize),
    /// Firing runs only.
    None,
}

/// Fixed-step trajectory on the grid `t_m = m·dt`, `m = 0..=steps`.
#[derive(Debug, Clone)]
pub struct GridTrajectory {
    pub n: usize,
    pub dt: f64,
    pub tau_d: f64,
    pub steps: usize,
    pub s0: Vec<f64>,
    /// Grid indices of stored samples, ascending.
    pub sample_index: Vec<usize>,
    /// Row-major `sample_index.len() × n`.
    pub samples: Vec<f64>,
    /// Per neuron, inclusive runs `(m_first, m_last)` of grid indices where
    /// the firing rate applied in the step was 1.
    pub firing_runs: Vec<Vec<(usize, usize)>>,
}

impl GridTrajectory {
    pub fn horizon(&self) -> f64 {
        self.steps as f64 * self.dt
    }

    pub fn sample(&self, k: usize) -> &[f64] {
        &self.samples[k * self.n..(k + 1) * self.n]
    }

    pub fn has_full_samples(&self) -> bool {
        self.sample_index.len() == self.steps + 1
    }

    /// `s_j(t)`: analytic history for `t <= 0`, linear interpolation between
    /// stored samples otherwise. `None` if no samples were recorded.
    pub fn drive_at(&self, j: usize, t: f64) -> Option<f64> {
        if t <= 0.0 {
            return Some(self.s0[j] * (-t).exp());
        }
        if self.sample_index.is_empty() {
            return None;
        }
        let x = t / self.dt;
        let k = self.sample_index.partition_point(|&m| (m as f64) <= x);
        if k == 0 {
            return Some(self.sample(0)[j]);
        }
        if k == self.sample_index.len() {
            return Some(self.sample(k - 1)[j]);
        }
        let (m0, m1) = (self.sample_index[k - 1] as f64, self.sample_index[k] as f64);
        let (v0, v1) = (self.sample(k - 1)[j], self.sample(k)[j]);
        Some(v0 + (v1 - v0) * (x - m0) / (m1 - m0))
    }
}

/// One piece `s(t) = (s_start − u)·e^{−(t − t_start)} + u` of an exact drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub t_start: f64,
    pub t_end: f64,
    pub firing: bool,
    pub s_start: f64,
}

impl Segment {
    pub fn eval(&self, t: f64) -> f64 {
        let u = if self.firing { 1.0 } else { 0.0 };
        (self.s_start - u) * (-(t - self.t_start)).exp() + u
    }
}

/// Event-exact piecewise-exponential trajectory. The first segment of each
/// neuron starts at `t = 0` and also represents the history on `(−τ_d, 0]`.
#[derive(Debug, Clone)]
pub struct ExpTrajectory {
    pub n: usize,
    pub tau_d: f64,
    pub horizon: f64,
    pub segments: Vec<Vec<Segment>>,
    /// Exact firing intervals, zero-length touches included.
    pub intervals: Vec<Vec<Interval>>,
    pub events: usize,
}

impl ExpTrajectory {
    pub fn segment_at(&self, j: usize, t: f64) -> &Segment {
        let segs = &self.segments[j];
        let k = segs.partition_point(|s| s.t_start <= t);
        &segs[k.saturating_sub(1)]
    }

    pub fn drive_at(&self, j: usize, t: f64) -> f64 {
        self.segment_at(j, t).eval(t)
    }

    /// Sorted distinct times at which any drive changes regime, starting with
    /// `−τ_d`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .segments
            .iter()
            .flat_map(|segs| segs.iter().skip(1).map(|s| s.t_start))
            .collect();
        b.push(-self.tau_d);
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }
}

#[derive(Debug, Clone)]
pub enum Trajectory {
    Grid(GridTrajectory),
    PiecewiseExp(ExpTrajectory),
}

impl Trajectory {
    pub fn n(&self) -> usize {
        match self {
            Trajectory::Grid(g) => g.n,
            Trajectory::PiecewiseExp(e) => e.n,
        }
    }

    pub fn horizon(&self) -> f64 {
        match self {
            Trajectory::Grid(g) => g.horizon(),
            Trajectory::PiecewiseExp(e) => e.horizon,
        }
    }

    pub fn tau_d(&self) -> f64 {
        match self {
            Trajectory::Grid(g) => g.tau_d,
            Trajectory::PiecewiseExp(e) => e.tau_d,
        }
    }

    /// `s_j(t)`, `None` for grid runs recorded without samples.
    pub fn drive_at(&self, j: usize, t: f64) -> Option<f64> {
        match self {
            Trajectory::Grid(g) => g.drive_at(j, t),
            Trajectory::PiecewiseExp(e) => Some(e.drive_at(j, t)),
        }
    }
}

/// Firing intervals of a simulated trajectory.
///
/// Grid runs become `[first grid time, last grid time]`; exact runs use the
/// event times. Intervals are clipped to `[0, T]`.
pub fn extract_firing_schedule(traj: &Trajectory) -> FiringSchedule {
    let horizon = traj.horizon();
    let intervals: Vec<Vec<Interval>> = match traj {
        Trajectory::Grid(g) => g
            .firing_runs
            .iter()
            .map(|runs| {
                runs.iter()
                    .map(|&(a, b)| Interval::new(a as f64 * g.dt, (b as f64 * g.dt).min(horizon)))
                    .collect()
            })
            .collect(),
        Trajectory::PiecewiseExp(e) => e
            .intervals
            .iter()
            .map(|ivs| {
                ivs.iter()
                    .filter(|iv| iv.start <= horizon)
                    .map(|iv| Interval::new(iv.start.max(0.0), iv.end.min(horizon)))
                    .collect()
            })
            .collect(),
    };
    FiringSchedule { n: traj.n(), horizon, intervals }
}

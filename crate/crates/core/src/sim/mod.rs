//! Forward simulation of the delayed Heaviside network.

pub mod beta;
pub mod c_assumption;
pub mod euler;
pub mod exact;
pub mod trajectory;

pub use beta::{estimate_beta_measure, BetaEstimate};
pub use c_assumption::{check_c_assumption, check_c_assumption_sampled};
pub use euler::{heaviside, simulate_euler, simulate_euler_with};
pub use exact::{simulate_exact, simulate_exact_with, ExactOptions};
pub use trajectory::{extract_firing_schedule, ExpTrajectory, GridTrajectory, Recording, Segment, Trajectory};

use crate::connectivity::ConnectivityMatrix;

/// `[s0·e^{−t}, s0·e^{−t} + 1]`, valid for any schedule.
pub fn drive_bounds(s0: f64, t: f64) -> (f64, f64) {
    let decay = s0 * (-t.max(0.0)).exp();
    (decay, decay + 1.0)
}

/// Bounds on `G_i(t) = Σ_j W_ij s_j(t)` for `t >= 0`:
/// `W⁻ + (Σ_j W_ij s0_j − W⁻)e^{−t} ≤ G_i(t) ≤ W⁺ + (Σ_j W_ij s0_j − W⁺)e^{−t}`.
pub fn network_input_bounds(w: &ConnectivityMatrix, s0: &[f64], i: usize, t: f64) -> (f64, f64) {
    let g0: f64 = (0..w.n()).map(|j| w.get(i, j) * s0[j]).sum();
    let (wp, wn) = (w.positive_row_sum(i), w.negative_row_sum(i));
    let e = (-t).exp();
    (wn + (g0 - wn) * e, wp + (g0 - wp) * e)
}

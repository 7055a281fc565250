//! Consistency of a candidate row with the observed firing pattern.

use crate::drive::ClosedFormDrive;
use crate::error::{Error, Result};
use crate::input::ExternalInput;
use crate::schedule::FiringSchedule;

/// Measure of `t ∈ [0, T]` where the sign of `Σ_j s_j(t − τ_d) w_j + B_i(t)`
/// disagrees with the firing state of `neuron` (`≥ 0` while firing, `< 0`
/// otherwise), estimated on a grid of spacing `sample_dt`. Zero means the row
/// reproduces the schedule at every sample.
pub fn verify_inequalities(
    w_row: &[f64],
    drive: &ClosedFormDrive,
    schedule: &FiringSchedule,
    input: &ExternalInput,
    neuron: usize,
    tau_d: f64,
    sample_dt: f64,
) -> Result<f64> {
    let n = drive.n();
    if w_row.len() != n || schedule.n != n || neuron >= n {
        return Err(Error::Dimension(format!(
            "row of length {} against n = {n}, neuron {neuron}",
            w_row.len()
        )));
    }
    if !(sample_dt > 0.0 && sample_dt.is_finite()) {
        return Err(Error::Config(format!("sample_dt must be positive, got {sample_dt}")));
    }
    let horizon = schedule.horizon.min(drive.horizon());
    let steps = (horizon / sample_dt).floor() as usize;
    let intervals = &schedule.intervals[neuron];
    let mut cursor = 0;
    let mut bad = 0usize;
    let mut s = vec![0.0; n];
    for m in 0..=steps {
        let t = m as f64 * sample_dt;
        while cursor < intervals.len() && intervals[cursor].end < t {
            cursor += 1;
        }
        let firing = cursor < intervals.len() && intervals[cursor].start <= t;
        for (j, sj) in s.iter_mut().enumerate() {
            *sj = drive.evaluate(j, t - tau_d)?;
        }
        let arg: f64 = s.iter().zip(w_row).map(|(a, b)| a * b).sum::<f64>() + input.value(t);
        if firing != (arg >= 0.0) {
            bad += 1;
        }
    }
    Ok(bad as f64 * sample_dt)
}

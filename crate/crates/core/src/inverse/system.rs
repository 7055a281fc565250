use nalgebra::{DMatrix, DVector};

use crate::drive::ClosedFormDrive;
use crate::error::{Error, Result};
use crate::input::ExternalInput;
use crate::schedule::FiringSchedule;

/// Linear system `A w = b` for one neuron, one row per firing onset:
/// `A[k][j] = s_j(t_k − τ_d)`, `b[k] = −B_i(t_k)`.
#[derive(Debug, Clone)]
pub struct NeuronSystem {
    pub neuron: usize,
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub t_starts: Vec<f64>,
}

impl NeuronSystem {
    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn is_underdetermined(&self) -> bool {
        self.rows() < self.cols()
    }

    /// `‖A w − b‖_∞`.
    pub fn max_residual(&self, w_row: &[f64]) -> f64 {
        let w = DVector::from_column_slice(w_row);
        (&self.a * w - &self.b).amax()
    }

    /// Same rows, different right-hand side.
    pub fn with_rhs(&self, b: DVector<f64>) -> Result<Self> {
        if b.len() != self.rows() {
            return Err(Error::Dimension(format!("rhs has {} entries, system {} rows", b.len(), self.rows())));
        }
        Ok(Self { b, ..self.clone() })
    }
}

/// Onsets of `neuron` that yield an equation. Onsets at `t = 0` mark firing
/// already in progress and are skipped.
pub fn usable_onsets(schedule: &FiringSchedule, neuron: usize) -> Vec<f64> {
    schedule.intervals[neuron].iter().map(|iv| iv.start).filter(|&t| t > 0.0).collect()
}

pub fn assemble_system(
    schedule: &FiringSchedule,
    drive: &ClosedFormDrive,
    input: &ExternalInput,
    neuron: usize,
    tau_d: f64,
) -> Result<NeuronSystem> {
    if neuron >= schedule.n {
        return Err(Error::Dimension(format!("neuron {neuron} out of range for n = {}", schedule.n)));
    }
    assemble_system_at(drive, input, neuron, tau_d, &usable_onsets(schedule, neuron))
}

/// Builds the system from explicit onset times.
pub fn assemble_system_at(
    drive: &ClosedFormDrive,
    input: &ExternalInput,
    neuron: usize,
    tau_d: f64,
    onsets: &[f64],
) -> Result<NeuronSystem> {
    if onsets.is_empty() {
        return Err(Error::EmptySystem(neuron));
    }
    let tol = 1e-12 * drive.horizon().max(1.0);
    if let Some(&t) = onsets.iter().find(|&&t| !input.is_continuous_at(t, tol)) {
        return Err(Error::OnsetAtDiscontinuity { neuron, time: t });
    }
    let n = drive.n();
    let mut a = DMatrix::zeros(onsets.len(), n);
    for (k, &t) in onsets.iter().enumerate() {
        let ts = t - tau_d;
        for j in 0..n {
            a[(k, j)] = drive.evaluate(j, ts)?;
        }
    }
    let b = DVector::from_iterator(onsets.len(), onsets.iter().map(|&t| -input.value(t)));
    Ok(NeuronSystem { neuron, a, b, t_starts: onsets.to_vec() })
}

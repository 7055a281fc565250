//! Choosing the truncation level `κ`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::inverse::system::NeuronSystem;
use crate::inverse::tsvd::{SelectionMethod, ThinSvd, TsvdSolution};

pub const DEFAULT_NU: f64 = 1.0;

/// Standard discrepancy principle for noise in the right-hand side: the
/// smallest `κ` with `‖A w_κ − b_δ‖ ≥ ν·δ > ‖A w_{κ+1} − b_δ‖`. Falls back to
/// `κ = rank` (flagged) when no level satisfies it.
pub fn choose_kappa_morozov_standard(
    sys: &NeuronSystem,
    b_noisy: &DVector<f64>,
    noise_norm: f64,
    nu: f64,
) -> Result<TsvdSolution> {
    if b_noisy.len() != sys.rows() {
        return Err(Error::Dimension(format!(
            "noisy rhs has {} entries, system has {} rows",
            b_noisy.len(),
            sys.rows()
        )));
    }
    let svd = ThinSvd::new(&sys.a)?;
    let res = svd.residual_norms(b_noisy);
    let threshold = nu * noise_norm;
    let hit = (0..svd.rank).find(|&k| res[k] >= threshold && threshold > res[k + 1]);
    let (kappa, ok) = match hit {
        Some(k) => (k, true),
        None => (svd.rank, false),
    };
    Ok(TsvdSolution::build(&svd, b_noisy, kappa, SelectionMethod::MorozovStandard, Some(ok)))
}

/// Adjusted discrepancy principle for noise in the matrix: the smallest `κ`
/// with `‖A_δ w_κ − b‖ ≥ ν‖(A_δ − A) w_κ‖ > ‖A_δ w_{κ+1} − b‖`, scanning
/// `κ = 0, 1, …` since the threshold moves with `w_κ`. When no level satisfies
/// both inequalities the result is flagged and `κ` is the level just before
/// the residual first drops below its threshold (`rank` if it never does).
pub fn choose_kappa_morozov_adjusted(
    sys_noisy: &NeuronSystem,
    sys_clean: &NeuronSystem,
    nu: f64,
) -> Result<TsvdSolution> {
    if sys_noisy.a.shape() != sys_clean.a.shape() {
        return Err(Error::Dimension(format!(
            "noisy system is {:?}, clean system is {:?}",
            sys_noisy.a.shape(),
            sys_clean.a.shape()
        )));
    }
    let b = &sys_clean.b;
    let svd = ThinSvd::new(&sys_noisy.a)?;
    let res = svd.residual_norms(b);
    let diff = &sys_noisy.a - &sys_clean.a;
    let beta = svd.coefficients(b);
    let mut w = DVector::zeros(svd.cols());
    let mut hit = None;
    let mut first_below = None;
    for k in 0..=svd.rank {
        let threshold = nu * (&diff * &w).norm();
        if first_below.is_none() && res[k] < threshold {
            first_below = Some(k);
        }
        if k == svd.rank {
            break;
        }
        if res[k] >= threshold && threshold > res[k + 1] {
            hit = Some(k);
            break;
        }
        w.axpy(beta[k] / svd.sigma[k], &svd.v.column(k), 1.0);
    }
    // The threshold moves with w_κ and can jump past the residual between two
    // consecutive levels; then keep the last level whose residual is still
    // above its own threshold.
    let (kappa, ok) = match (hit, first_below) {
        (Some(k), _) => (k, true),
        (None, Some(m)) => (m.saturating_sub(1), false),
        (None, None) => (svd.rank, false),
    };
    Ok(TsvdSolution::build(&svd, b, kappa, SelectionMethod::MorozovAdjusted, Some(ok)))
}

/// `‖w_κ − w_true‖₂` for `κ = 0..=rank`. Benchmark use only.
pub fn oracle_errors(sys: &NeuronSystem, b: &DVector<f64>, w_true: &[f64]) -> Result<Vec<f64>> {
    let svd = ThinSvd::new(&sys.a)?;
    Ok(oracle_errors_with(&svd, b, w_true))
}

pub(crate) fn oracle_errors_with(svd: &ThinSvd, b: &DVector<f64>, w_true: &[f64]) -> Vec<f64> {
    let beta = svd.coefficients(b);
    let mut w = DVector::zeros(svd.cols());
    let truth = DVector::from_column_slice(w_true);
    let mut out = Vec::with_capacity(svd.rank + 1);
    out.push((&w - &truth).norm());
    for k in 0..svd.rank {
        w.axpy(beta[k] / svd.sigma[k], &svd.v.column(k), 1.0);
        out.push((&w - &truth).norm());
    }
    out
}

/// `κ` minimizing `‖w_κ − w_true‖₂` for a single row. Benchmark use only.
pub fn choose_kappa_oracle(
    sys: &NeuronSystem,
    b: &DVector<f64>,
    w_true: &[f64],
) -> Result<TsvdSolution> {
    let svd = ThinSvd::new(&sys.a)?;
    let errs = oracle_errors_with(&svd, b, w_true);
    let kappa = argmin(&errs);
    Ok(TsvdSolution::build(&svd, b, kappa, SelectionMethod::MinFrobeniusOracle, Some(true)))
}

pub(crate) fn argmin(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .unwrap_or(0)
}

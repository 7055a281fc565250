//! Truncated SVD solutions `w_κ = Σ_{j≤κ} (⟨u_j, b⟩ / σ_j) v_j`.
//!
//! Residual and solution norms for every `κ` come from the spectral
//! coefficients `β_j = ⟨u_j, b⟩`: `‖A w_κ − b‖² = ‖b_⊥‖² + Σ_{j>κ} β_j²` and
//! `‖w_κ‖² = Σ_{j≤κ} (β_j/σ_j)²`, accumulated as suffix/prefix sums so that
//! both sequences are monotone in floating point as well.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inverse::system::NeuronSystem;

/// Singular values below this fraction of `σ_1` do not count towards the rank.
pub const RANK_RTOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMethod {
    FixedKappa,
    MorozovStandard,
    MorozovAdjusted,
    MinFrobeniusOracle,
}

/// Thin SVD with singular values sorted in descending order.
#[derive(Debug, Clone)]
pub struct ThinSvd {
    pub u: DMatrix<f64>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<f64>,
    pub rank: usize,
}

impl ThinSvd {
    pub fn new(a: &DMatrix<f64>) -> Result<Self> {
        if a.nrows() == 0 || a.ncols() == 0 {
            return Err(Error::Dimension("cannot factor an empty matrix".into()));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("system matrix has non-finite entries".into()));
        }
        let svd = a.clone().svd(true, true);
        let u = svd.u.ok_or_else(|| Error::Numerical("SVD did not return U".into()))?;
        let vt = svd.v_t.ok_or_else(|| Error::Numerical("SVD did not return V".into()))?;
        let raw = svd.singular_values;
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&x, &y| raw[y].total_cmp(&raw[x]));
        let sigma: Vec<f64> = order.iter().map(|&k| raw[k]).collect();
        let u = DMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
        let v = DMatrix::from_fn(vt.ncols(), order.len(), |r, c| vt[(order[c], r)]);
        let cutoff = sigma.first().copied().unwrap_or(0.0) * RANK_RTOL;
        let rank = sigma.iter().take_while(|&&s| s > cutoff && s > 0.0).count();
        Ok(Self { u, sigma, v, rank })
    }

    pub fn rows(&self) -> usize {
        self.u.nrows()
    }

    pub fn cols(&self) -> usize {
        self.v.nrows()
    }

    /// Dimension of the null space of `A`.
    pub fn nullity(&self) -> usize {
        self.cols() - self.rank
    }

    pub fn coefficients(&self, b: &DVector<f64>) -> Vec<f64> {
        (0..self.sigma.len()).map(|j| self.u.column(j).dot(b)).collect()
    }

    pub fn solution(&self, b: &DVector<f64>, kappa: usize) -> DVector<f64> {
        let beta = self.coefficients(b);
        self.solution_from(&beta, kappa)
    }

    fn solution_from(&self, beta: &[f64], kappa: usize) -> DVector<f64> {
        let mut w = DVector::zeros(self.cols());
        for j in 0..kappa.min(self.rank) {
            w.axpy(beta[j] / self.sigma[j], &self.v.column(j), 1.0);
        }
        w
    }

    /// `‖A w_κ − b‖₂` for `κ = 0..=rank`.
    pub fn residual_norms(&self, b: &DVector<f64>) -> Vec<f64> {
        let beta = self.coefficients(b);
        self.residuals_from(b, &beta)
    }

    fn residuals_from(&self, b: &DVector<f64>, beta: &[f64]) -> Vec<f64> {
        // part of b outside span(U)
        let mut proj = DVector::zeros(b.len());
        for (j, bj) in beta.iter().enumerate() {
            proj.axpy(*bj, &self.u.column(j), 1.0);
        }
        let perp2 = (b - proj).norm_squared();
        let mut out = vec![0.0; self.rank + 1];
        let mut acc = perp2 + beta[self.rank..].iter().map(|x| x * x).sum::<f64>();
        out[self.rank] = acc.sqrt();
        for k in (0..self.rank).rev() {
            acc += beta[k] * beta[k];
            out[k] = acc.sqrt();
        }
        out
    }

    /// `‖w_κ‖₂` for `κ = 0..=rank`.
    pub fn solution_norms(&self, b: &DVector<f64>) -> Vec<f64> {
        let beta = self.coefficients(b);
        let mut out = Vec::with_capacity(self.rank + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for k in 0..self.rank {
            let c = beta[k] / self.sigma[k];
            acc += c * c;
            out.push(acc.sqrt());
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TsvdSolution {
    pub kappa: usize,
    pub rank: usize,
    pub w_row: Vec<f64>,
    pub singular_values: Vec<f64>,
    /// `‖A w_κ − b‖₂` for `κ = 0..=rank`.
    pub residual_norms: Vec<f64>,
    /// `‖w_κ‖₂` for `κ = 0..=rank`.
    pub solution_norms: Vec<f64>,
    pub method: SelectionMethod,
    /// Requested `κ` exceeded the numerical rank and was clipped.
    pub clipped: bool,
    /// Whether the selection rule's criterion was met; `None` for fixed `κ`.
    pub criterion_satisfied: Option<bool>,
}

impl TsvdSolution {
    pub(crate) fn build(
        svd: &ThinSvd,
        b: &DVector<f64>,
        kappa: usize,
        method: SelectionMethod,
        criterion_satisfied: Option<bool>,
    ) -> Self {
        let clipped = kappa > svd.rank;
        let kappa = kappa.min(svd.rank);
        let beta = svd.coefficients(b);
        Self {
            kappa,
            rank: svd.rank,
            w_row: svd.solution_from(&beta, kappa).iter().copied().collect(),
            singular_values: svd.sigma.clone(),
            residual_norms: svd.residuals_from(b, &beta),
            solution_norms: svd.solution_norms(b),
            method,
            clipped,
            criterion_satisfied,
        }
    }

    pub fn residual(&self) -> f64 {
        self.residual_norms[self.kappa]
    }

    pub fn nullity(&self) -> usize {
        self.w_row.len() - self.rank
    }
}

/// TSVD solution at a fixed truncation level; `kappa` above the numerical
/// rank is clipped and flagged.
pub fn tsvd_solve(sys: &NeuronSystem, kappa: usize) -> Result<TsvdSolution> {
    let svd = ThinSvd::new(&sys.a)?;
    if kappa > svd.rank {
        log::warn!(
            "neuron {}: kappa = {kappa} exceeds numerical rank {}, clipping",
            sys.neuron,
            svd.rank
        );
    }
    Ok(TsvdSolution::build(&svd, &sys.b, kappa, SelectionMethod::FixedKappa, None))
}

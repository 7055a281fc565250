//! Spectral diagnostics of the row systems: singular-value bounds and the
//! algebraic-versus-exponential decay classification.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inverse::{NeuronSystem, ThinSvd, RANK_RTOL};

/// Below this norm the projected onset difference is treated as zero and the
/// `σ_r` bound is skipped.
pub const E_HAT_MIN: f64 = 1e-10;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumDiagnostics {
    pub neuron: usize,
    pub sigma: Vec<f64>,
    pub rank: usize,
    /// Smallest gap between consecutive onsets, and the index `q` where it occurs.
    pub h_i: Option<f64>,
    pub q: Option<usize>,
    /// `‖e^{−T} s0‖₂`
    pub c1: f64,
    /// `‖s0 + 1‖₂`
    pub c2: f64,
    /// `√2·c1/c2·h_i⁻¹`
    pub cond_lower_bound: Option<f64>,
    /// `σ_1/σ_min`; `None` when `A` does not have full column or row rank.
    pub cond_actual: Option<f64>,
    pub invertible: bool,
    pub sigma1_bound_holds: bool,
    /// `‖ê‖`, `ê` the projection of `e_{q+1} − e_q` onto the column space of `A`.
    pub e_hat_norm: Option<f64>,
    /// `c2·h_i/‖ê‖`
    pub sigma_r_upper: Option<f64>,
    pub sigma_r_bound_holds: Option<bool>,
    pub cond_bound_holds: Option<bool>,
}

pub fn spectrum_diagnostics(sys: &NeuronSystem, s0: &[f64], horizon: f64) -> Result<SpectrumDiagnostics> {
    if s0.len() != sys.cols() {
        return Err(Error::Dimension(format!("{} initial drives for {} columns", s0.len(), sys.cols())));
    }
    let svd = ThinSvd::new(&sys.a)?;
    let decay = (-horizon).exp();
    let c1 = s0.iter().map(|s| (decay * s).powi(2)).sum::<f64>().sqrt();
    let c2 = s0.iter().map(|s| (s + 1.0).powi(2)).sum::<f64>().sqrt();
    let sigma1 = svd.sigma[0];
    // tiny relative slack: σ_1 and the row norms are computed along different paths
    let sigma1_bound_holds = sigma1 >= c1 * (1.0 - 1e-12);

    let gap = sys
        .t_starts
        .windows(2)
        .enumerate()
        .map(|(k, w)| (w[1] - w[0], k))
        .min_by(|a, b| a.0.total_cmp(&b.0));
    let (h_i, q) = match gap {
        Some((h, k)) => (Some(h), Some(k)),
        None => (None, None),
    };
    let full = svd.sigma.len();
    let cond_actual = (svd.rank == full).then(|| sigma1 / svd.sigma[full - 1]);
    let invertible = sys.rows() == sys.cols() && svd.rank == sys.cols();
    let cond_lower_bound = h_i.map(|h| std::f64::consts::SQRT_2 * c1 / c2 / h);

    let (mut e_hat_norm, mut sigma_r_upper, mut sigma_r_bound_holds) = (None, None, None);
    if let (Some(h), Some(q)) = (h_i, q) {
        let mut e = DVector::zeros(sys.rows());
        e[q] = -1.0;
        e[q + 1] = 1.0;
        let ur = svd.u.columns(0, svd.rank);
        let norm = (ur.transpose() * &e).norm();
        e_hat_norm = Some(norm);
        if norm >= E_HAT_MIN && svd.rank > 0 {
            let upper = c2 * h / norm;
            sigma_r_upper = Some(upper);
            sigma_r_bound_holds = Some(svd.sigma[svd.rank - 1] <= upper * (1.0 + 1e-12));
        }
    }
    let cond_bound_holds = match (invertible, cond_actual, cond_lower_bound) {
        (true, Some(c), Some(lb)) => Some(c >= lb * (1.0 - 1e-12)),
        _ => None,
    };
    Ok(SpectrumDiagnostics {
        neuron: sys.neuron,
        sigma: svd.sigma.clone(),
        rank: svd.rank,
        h_i,
        q,
        c1,
        c2,
        cond_lower_bound,
        cond_actual,
        invertible,
        sigma1_bound_holds,
        e_hat_norm,
        sigma_r_upper,
        sigma_r_bound_holds,
        cond_bound_holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    Mild,
    Severe,
    Inconclusive,
}

/// `σ_m ≈ C·m^{−α}` or `σ_m ≈ C·e^{−α m}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayLaw {
    pub c: f64,
    pub alpha: f64,
}

impl DecayLaw {
    pub fn algebraic(&self, m: f64) -> f64 {
        self.c * m.powf(-self.alpha)
    }

    pub fn exponential(&self, m: f64) -> f64 {
        self.c * (-self.alpha * m).exp()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayFit {
    pub algebraic: DecayLaw,
    pub exponential: DecayLaw,
    pub r2_algebraic: f64,
    pub r2_exponential: f64,
    /// Number of singular values used (those above the rank cutoff).
    pub used: usize,
    pub classification: DecayClass,
}

/// Minimum r² advantage for a decay law to win the classification.
pub const R2_MARGIN: f64 = 0.05;

/// Least-squares line `y ≈ p + s·x`, with its r².
fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - icpt - slope * a).powi(2)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    (icpt, slope, r2)
}

/// Fits both decay laws to the singular values above `1e-14·σ_1`, indexed
/// from `m = 1`.
pub fn fit_decay(sigma: &[f64]) -> Result<DecayFit> {
    let top = sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = top * RANK_RTOL;
    let vals: Vec<f64> = sigma.iter().copied().filter(|&s| s > cutoff && s > 0.0).collect();
    if vals.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "{} singular values above the cutoff, need 4",
            vals.len()
        )));
    }
    let m: Vec<f64> = (1..=vals.len()).map(|k| k as f64).collect();
    let log_m: Vec<f64> = m.iter().map(|v| v.ln()).collect();
    let log_s: Vec<f64> = vals.iter().map(|v| v.ln()).collect();
    let (pa, sa, r2a) = line_fit(&log_m, &log_s);
    let (pe, se, r2e) = line_fit(&m, &log_s);
    let classification = if r2e - r2a >= R2_MARGIN {
        DecayClass::Severe
    } else if r2a - r2e >= R2_MARGIN {
        DecayClass::Mild
    } else {
        DecayClass::Inconclusive
    };
    Ok(DecayFit {
        algebraic: DecayLaw { c: pa.exp(), alpha: -sa },
        exponential: DecayLaw { c: pe.exp(), alpha: -se },
        r2_algebraic: r2a,
        r2_exponential: r2e,
        used: vals.len(),
        classification,
    })
}

/// Most frequent class; ties and empty input give `Inconclusive`.
pub fn majority_vote(classes: &[DecayClass]) -> DecayClass {
    let count = |c: DecayClass| classes.iter().filter(|&&x| x == c).count();
    let (mild, severe, inc) = (count(DecayClass::Mild), count(DecayClass::Severe), count(DecayClass::Inconclusive));
    if severe > mild && severe > inc {
        DecayClass::Severe
    } else if mild > severe && mild > inc {
        DecayClass::Mild
    } else {
        DecayClass::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn algebraic_synthetic() {
        let s: Vec<f64> = (1..=30).map(|m| 2.0 * (m as f64).powi(-3)).collect();
        let f = fit_decay(&s).unwrap();
        assert!((f.algebraic.c - 2.0).abs() < 1e-10);
        assert!((f.algebraic.alpha - 3.0).abs() < 1e-12);
        assert!((f.r2_algebraic - 1.0).abs() < 1e-12);
        assert_eq!(f.classification, DecayClass::Mild);
    }

    #[test]
    fn exponential_synthetic() {
        let s: Vec<f64> = (1..=30).map(|m| (-0.5 * m as f64).exp()).collect();
        let f = fit_decay(&s).unwrap();
        assert!((f.exponential.alpha - 0.5).abs() < 1e-12);
        assert!((f.exponential.c - 1.0).abs() < 1e-10);
        assert_eq!(f.classification, DecayClass::Severe);
    }

    #[test]
    fn scale_equivariant() {
        let s: Vec<f64> = (1..=20).map(|m| 1.0 / (m as f64 + 0.3 * (m as f64).sin())).collect();
        let f = fit_decay(&s).unwrap();
        let g = fit_decay(&s.iter().map(|v| v * 7.5).collect::<Vec<_>>()).unwrap();
        assert!((g.algebraic.c / f.algebraic.c - 7.5).abs() < 1e-10);
        assert!((g.algebraic.alpha - f.algebraic.alpha).abs() < 1e-12);
        assert!((g.exponential.alpha - f.exponential.alpha).abs() < 1e-12);
        assert_eq!(f.classification, g.classification);
    }

    #[test]
    fn too_few_values() {
        assert!(matches!(fit_decay(&[1.0, 0.5, 0.1]), Err(Error::InsufficientData(_))));
        // values under the cutoff do not count
        assert!(fit_decay(&[1.0, 0.5, 0.1, 1e-20, 0.0]).is_err());
    }

    #[test]
    fn vote() {
        use DecayClass::*;
        assert_eq!(majority_vote(&[Severe, Severe, Mild]), Severe);
        assert_eq!(majority_vote(&[Severe, Mild]), Inconclusive);
        assert_eq!(majority_vote(&[]), Inconclusive);
        assert_eq!(majority_vote(&[Mild, Inconclusive, Mild]), Mild);
    }

    fn system(a: DMatrix<f64>, t: Vec<f64>) -> NeuronSystem {
        let k = a.nrows();
        NeuronSystem { neuron: 0, a, b: DVector::from_element(k, -0.1), t_starts: t }
    }

    #[test]
    fn zero_history_gives_trivial_bound() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.3, 0.9]);
        let d = spectrum_diagnostics(&system(a, vec![1.0, 2.5]), &[0.0, 0.0], 10.0).unwrap();
        assert_eq!(d.c1, 0.0);
        assert_eq!(d.cond_lower_bound, Some(0.0));
        assert_eq!(d.cond_bound_holds, Some(true));
        assert!(d.sigma1_bound_holds);
        assert_eq!(d.h_i, Some(1.5));
        assert_eq!(d.q, Some(0));
        // invertible A: ê = e_{q+1} − e_q itself
        assert!((d.e_hat_norm.unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn single_row_has_no_gap() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 0.2]);
        let d = spectrum_diagnostics(&system(a, vec![1.0]), &[0.5, 0.5], 10.0).unwrap();
        assert!(d.h_i.is_none() && d.cond_lower_bound.is_none() && d.sigma_r_bound_holds.is_none());
    }
}

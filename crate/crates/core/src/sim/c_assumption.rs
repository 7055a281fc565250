//! Check that no binary firing pattern can pin a neuron's input at threshold:
//! `c_i ≠ −Σ_j W_ij v_j` for every `v ∈ {0,1}^n`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connectivity::ConnectivityMatrix;
use crate::error::{Error, Result};

pub const EXHAUSTIVE_MAX_N: usize = 25;

fn tolerance(c: f64) -> f64 {
    1e-12 * (1.0 + c.abs())
}

fn subset_sums(weights: &[f64]) -> Vec<f64> {
    let mut sums = vec![0.0; 1 << weights.len()];
    for mask in 1usize..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + weights[low];
    }
    sums
}

/// Exhaustive check, one boolean per neuron (`true` = assumption holds).
///
/// Splits the columns in two halves and matches subset sums of one half
/// against the sorted subset sums of the other.
pub fn check_c_assumption(w: &ConnectivityMatrix, c: &[f64]) -> Result<Vec<bool>> {
    let n = w.n();
    if c.len() != n {
        return Err(Error::Dimension(format!("{} input levels for n = {n}", c.len())));
    }
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::TooLarge { n, max: EXHAUSTIVE_MAX_N });
    }
    let half = n / 2;
    Ok((0..n)
        .map(|i| {
            let row = w.row(i);
            let left = subset_sums(&row[..half]);
            let mut right = subset_sums(&row[half..]);
            right.sort_by(f64::total_cmp);
            let tol = tolerance(c[i]);
            !left.iter().any(|&x| {
                let target = -c[i] - x;
                let k = right.partition_point(|&y| y < target - tol);
                k < right.len() && right[k] <= target + tol
            })
        })
        .collect())
}

/// Randomized check over `samples` binary vectors. `true` means no violation
/// was found, which is not a proof.
pub fn check_c_assumption_sampled(
    w: &ConnectivityMatrix,
    c: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<bool>> {
    let n = w.n();
    if c.len() != n {
        return Err(Error::Dimension(format!("{} input levels for n = {n}", c.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = vec![true; n];
    let mut v = vec![false; n];
    for _ in 0..samples {
        v.iter_mut().for_each(|b| *b = rng.random());
        for i in 0..n {
            let sum: f64 = (0..n).filter(|&j| v[j]).map(|j| w.get(i, j)).sum();
            if (c[i] + sum).abs() <= tolerance(c[i]) {
                ok[i] = false;
            }
        }
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(w: &ConnectivityMatrix, c: &[f64]) -> Vec<bool> {
        let n = w.n();
        (0..n)
            .map(|i| {
                (0u64..1 << n).all(|mask| {
                    let s: f64 = (0..n).filter(|j| mask >> j & 1 == 1).map(|j| w.get(i, j)).sum();
                    (c[i] + s).abs() > tolerance(c[i])
                })
            })
            .collect()
    }

    #[test]
    fn zero_matrix() {
        let w = ConnectivityMatrix::zeros(4);
        assert_eq!(check_c_assumption(&w, &[0.1; 4]).unwrap(), vec![true; 4]);
        assert_eq!(check_c_assumption(&w, &[0.0; 4]).unwrap(), vec![false; 4]);
    }

    #[test]
    fn constructed_violation() {
        let w = ConnectivityMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(check_c_assumption(&w, &[-3.0, 0.1]).unwrap(), vec![false, true]);
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.random_range(1..9);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.random_range(-3i32..4) as f64 * 0.5).collect())
                .collect();
            let w = ConnectivityMatrix::from_rows(&rows).unwrap();
            let c: Vec<f64> = (0..n).map(|_| rng.random_range(-4i32..5) as f64 * 0.5).collect();
            assert_eq!(check_c_assumption(&w, &c).unwrap(), brute(&w, &c));
        }
    }

    #[test]
    fn too_large() {
        let w = ConnectivityMatrix::zeros(26);
        assert!(matches!(check_c_assumption(&w, &[0.1; 26]), Err(Error::TooLarge { .. })));
        assert_eq!(check_c_assumption_sampled(&w, &[0.1; 26], 100, 1).unwrap(), vec![true; 26]);
    }
}

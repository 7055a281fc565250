//! Connectivity matrices and the two benchmark connectivity functions.
//!
//! Row `i` of a [`ConnectivityMatrix`] holds the weights of all connections
//! *into* neuron `i`, so `w[(i, j)]` is the effective strength from `j` to `i`.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityMatrix {
    w: DMatrix<f64>,
}

impl ConnectivityMatrix {
    pub fn new(w: DMatrix<f64>) -> Result<Self> {
        if w.nrows() != w.ncols() || w.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "connectivity must be square and non-empty, got {}x{}",
                w.nrows(),
                w.ncols()
            )));
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("connectivity has non-finite entries".into()));
        }
        Ok(Self { w })
    }

    pub fn zeros(n: usize) -> Self {
        Self { w: DMatrix::zeros(n, n) }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("connectivity rows must all have length n".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn n(&self) -> usize {
        self.w.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.w
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[(i, j)]
    }

    /// Incoming weights of neuron `i`.
    pub fn row(&self, i: usize) -> Vec<f64> {
        self.w.row(i).iter().copied().collect()
    }

    pub fn set_row(&mut self, i: usize, row: &[f64]) {
        for (j, v) in row.iter().enumerate() {
            self.w[(i, j)] = *v;
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n()).map(|i| self.row(i)).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.w.norm()
    }

    /// `‖self − truth‖_F / ‖truth‖_F`.
    pub fn relative_error(&self, truth: &ConnectivityMatrix) -> f64 {
        (&self.w - &truth.w).norm() / truth.w.norm()
    }

    /// Sum of positive entries of row `i` (`W⁺`).
    pub fn positive_row_sum(&self, i: usize) -> f64 {
        self.w.row(i).iter().filter(|v| **v >= 0.0).sum()
    }

    /// Sum of negative entries of row `i` (`W⁻`).
    pub fn negative_row_sum(&self, i: usize) -> f64 {
        self.w.row(i).iter().filter(|v| **v < 0.0).sum()
    }

    /// Writes one CSV line per matrix row, 17 significant digits per entry.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for i in 0..self.n() {
            let line: Vec<String> = self.w.row(i).iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut rows = Vec::new();
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Config(format!("bad CSV entry {tok:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }
}

impl Serialize for ConnectivityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConnectivityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        Self::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Sampling coordinate of index `i` on `[-0.5, 0.5]`, endpoints included.
pub fn grid_coordinate(i: usize, n: usize) -> f64 {
    if n <= 1 {
        -0.5
    } else {
        -0.5 + i as f64 / (n - 1) as f64
    }
}

/// Symmetric banded connectivity function `−25(1 + tanh(2 − 20|x − y|))`.
pub fn symmetric_kernel(x: f64, y: f64) -> f64 {
    -25.0 * (1.0 + (2.0 - 20.0 * (x - y).abs()).tanh())
}

/// Non-symmetric connectivity function: inhibitory band above the diagonal,
/// a linear ramp from `−25(1 + tanh 2)` to 0 over `0 ≤ x − y < 0.49`, zero
/// elsewhere.
pub fn nonsymmetric_kernel(x: f64, y: f64) -> f64 {
    if x < y {
        symmetric_kernel(x, y)
    } else if x < y + 0.49 {
        25.0 * (1.0 + 2f64.tanh()) * (100.0 / 49.0 * (x - y) - 1.0)
    } else {
        0.0
    }
}

fn sample_kernel(n: usize, kernel: impl Fn(f64, f64) -> f64) -> ConnectivityMatrix {
    let n = n.max(1);
    let w = DMatrix::from_fn(n, n, |i, j| kernel(grid_coordinate(i, n), grid_coordinate(j, n)));
    ConnectivityMatrix { w }
}

pub fn generate_symmetric_connectivity(n: usize) -> ConnectivityMatrix {
    sample_kernel(n, symmetric_kernel)
}

pub fn generate_nonsymmetric_connectivity(n: usize) -> ConnectivityMatrix {
    sample_kernel(n, nonsymmetric_kernel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_neuron_symmetric() {
        let w = generate_symmetric_connectivity(1);
        let expected = -25.0 * (1.0 + 2f64.tanh());
        assert_eq!(w.get(0, 0), expected);
        assert!((expected + 49.1007).abs() < 1e-3);
    }

    #[test]
    fn symmetric_is_symmetric_and_bounded() {
        for n in [2, 7, 20, 100] {
            let w = generate_symmetric_connectivity(n);
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(w.get(i, j), w.get(j, i));
                    assert!((-50.0..=0.0).contains(&w.get(i, j)));
                }
            }
        }
    }

    #[test]
    fn nonsymmetric_branches() {
        let peak = -25.0 * (1.0 + 2f64.tanh());
        assert!((nonsymmetric_kernel(0.1, 0.1) - peak).abs() < 1e-12);
        let near_end = nonsymmetric_kernel(0.49 - 1e-9, 0.0);
        assert!(near_end < 0.0 && near_end > -1e-6);
        assert_eq!(nonsymmetric_kernel(0.49, 0.0), 0.0);
        assert_eq!(nonsymmetric_kernel(0.3, -0.5), 0.0);
        assert_eq!(nonsymmetric_kernel(-0.2, 0.3), symmetric_kernel(-0.2, 0.3));
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(generate_symmetric_connectivity(33), generate_symmetric_connectivity(33));
        assert_eq!(
            generate_nonsymmetric_connectivity(33),
            generate_nonsymmetric_connectivity(33)
        );
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let w = generate_nonsymmetric_connectivity(9);
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        let back = ConnectivityMatrix::read_csv(&buf[..]).unwrap();
        assert_eq!(w, back);
    }

    #[test]
    fn rejects_ragged_and_non_finite() {
        assert!(ConnectivityMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
        assert!(ConnectivityMatrix::from_rows(&[vec![f64::NAN]]).is_err());
    }
}

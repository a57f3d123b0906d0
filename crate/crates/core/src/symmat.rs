//! Small symmetric matrices with cached ascending spectra.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::ConeError;

/// Largest supported dimension.
pub const MAX_DIM: usize = 4;

/// A symmetric `n × n` matrix, `1 ≤ n ≤ 4`.
///
/// Only the upper triangle is stored (row-major), so symmetry is exact by
/// construction. The ascending eigenvalues are computed once at construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Packed", into = "Packed")]
pub struct SymMat {
    n: usize,
    entries: Vec<f64>,
    eigs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct Packed {
    n: usize,
    upper: Vec<f64>,
}

impl TryFrom<Packed> for SymMat {
    type Error = ConeError;
    fn try_from(p: Packed) -> Result<Self, ConeError> {
        SymMat::new(p.n, p.upper)
    }
}

impl From<SymMat> for Packed {
    fn from(m: SymMat) -> Packed {
        Packed { n: m.n, upper: m.entries }
    }
}

fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

fn packed_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // Row i of the packed upper triangle starts after rows 0..i of lengths n, n-1, ...
    i * (2 * n - i + 1) / 2 + (j - i)
}

impl SymMat {
    /// Builds a matrix from its packed upper triangle (row-major).
    pub fn new(n: usize, upper: Vec<f64>) -> Result<SymMat, ConeError> {
        if n == 0 || n > MAX_DIM {
            return Err(ConeError::UnsupportedDimension(n));
        }
        if upper.len() != packed_len(n) {
            return Err(ConeError::DimensionMismatch {
                expected: packed_len(n),
                found: upper.len(),
            });
        }
        if upper.iter().any(|v| !v.is_finite()) {
            return Err(ConeError::NonFinite);
        }
        let eigs = ascending_eigenvalues(&dense(n, &upper));
        Ok(SymMat {
            n,
            entries: upper,
            eigs,
        })
    }

    /// Builds a matrix from full rows, symmetrizing nothing: rows must agree.
    pub fn from_rows(rows: &[&[f64]]) -> Result<SymMat, ConeError> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(ConeError::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let mut upper = Vec::with_capacity(packed_len(n));
        for (i, row) in rows.iter().enumerate() {
            for j in i..n {
                if (row[j] - rows[j][i]).abs() > 0.0 {
                    return Err(ConeError::NotSymmetric);
                }
                upper.push(row[j]);
            }
        }
        SymMat::new(n, upper)
    }

    pub fn diag(d: &[f64]) -> SymMat {
        let n = d.len();
        let mut upper = vec![0.0; packed_len(n)];
        for (i, v) in d.iter().enumerate() {
            upper[packed_index(n, i, i)] = *v;
        }
        SymMat::new(n, upper).expect("finite diagonal of supported size")
    }

    pub fn identity(n: usize) -> SymMat {
        SymMat::diag(&vec![1.0; n])
    }

    pub fn zeros(n: usize) -> SymMat {
        SymMat::diag(&vec![0.0; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[packed_index(self.n, i, j)]
    }

    /// Packed upper triangle, row-major.
    pub fn upper(&self) -> &[f64] {
        &self.entries
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigs
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    fn map_entries(&self, f: impl Fn(usize, usize, f64) -> f64) -> SymMat {
        let mut upper = Vec::with_capacity(self.entries.len());
        for i in 0..self.n {
            for j in i..self.n {
                upper.push(f(i, j, self.get(i, j)));
            }
        }
        SymMat::new(self.n, upper).expect("finite entries")
    }

    /// `self + t·I`.
    pub fn shift(&self, t: f64) -> SymMat {
        self.map_entries(|i, j, v| if i == j { v + t } else { v })
    }

    pub fn scale(&self, s: f64) -> SymMat {
        self.map_entries(|_, _, v| s * v)
    }

    pub fn neg(&self) -> SymMat {
        self.scale(-1.0)
    }

    pub fn add(&self, other: &SymMat) -> SymMat {
        assert_eq!(self.n, other.n, "dimension mismatch in SymMat::add");
        self.map_entries(|i, j, v| v + other.get(i, j))
    }

    /// Trace-free part `A − (tr A / n)·I`.
    pub fn trace_free(&self) -> SymMat {
        self.shift(-self.trace() / self.n as f64)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.get(i, j).powi(2);
            }
        }
        s.sqrt()
    }

    /// Spectral norm `max |λᵢ|`.
    pub fn op_norm(&self) -> f64 {
        self.eigs.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Leading `k × k` block and trailing `(n−k) × (n−k)` block.
    pub fn blocks(&self, k: usize) -> (SymMat, SymMat) {
        assert!(k > 0 && k < self.n, "block split must be proper");
        let sub = |lo: usize, hi: usize| {
            let mut upper = Vec::new();
            for i in lo..hi {
                for j in i..hi {
                    upper.push(self.get(i, j));
                }
            }
            SymMat::new(hi - lo, upper).expect("finite block")
        };
        (sub(0, k), sub(k, self.n))
    }

    /// Eigen-decomposition: ascending eigenvalues with matching orthonormal
    /// eigenvectors as columns.
    pub fn eigen_decomposition(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        let eig = SymmetricEigen::new(dense(self.n, &self.entries));
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = order
            .iter()
            .map(|&c| (0..self.n).map(|r| eig.eigenvectors[(r, c)]).collect())
            .collect();
        (values, vectors)
    }
}

fn dense(n: usize, upper: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| upper[packed_index(n, i, j)])
}

fn ascending_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = if m.nrows() == 1 {
        vec![m[(0, 0)]]
    } else {
        SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect()
    };
    v.sort_by(f64::total_cmp);
    v
}

/// Ascending eigenvalues of `a`.
pub fn eigenvalues(a: &SymMat) -> Vec<f64> {
    a.eigenvalues().to_vec()
}

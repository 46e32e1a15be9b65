//! Dense symmetric matrix storage.
//!
//! Every adjacency matrix, parameter matrix and estimate in the crate is a
//! [`SymmetricMatrix`]. Writes go through [`SymmetricMatrix::set`], which
//! updates both `(i, j)` and `(j, i)`, so the two halves are always
//! bit-identical.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    // row-major, n * n
    values: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::input(format!("matrix order must be at least 2, got {n}")));
        }
        Ok(SymmetricMatrix {
            n,
            values: vec![0.0; n * n],
        })
    }

    /// Builds a matrix from a function evaluated on the upper triangle
    /// (`i <= j`) and mirrored.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        Ok(m)
    }

    /// Builds a matrix from rows, requiring exact symmetry.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows_tol(rows, 0.0)
    }

    /// Builds a matrix from rows that are symmetric up to `tol` (absolute).
    /// The upper triangle wins when the halves differ.
    pub fn from_rows_tol(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, other) in rows.iter().enumerate().skip(i + 1) {
                let (a, b) = (row[j], other[i]);
                let close = (a - b).abs() <= tol;
                if !close && a != b {
                    return Err(Error::input(format!(
                        "matrix is not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Self::from_upper_fn(n, |i, j| rows[i][j])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.n + j] = v;
        self.values[j * self.n + i] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Row-major view of all `n * n` entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn set_diagonal(&mut self, diag: &[f64]) {
        assert_eq!(diag.len(), self.n, "diagonal length mismatch");
        for (i, &d) in diag.iter().enumerate() {
            self.values[i * self.n + i] = d;
        }
    }

    pub fn is_hollow(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Iterates `(i, j, value)` over the strict upper triangle.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    /// Applies `f` to every entry, preserving symmetry.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> SymmetricMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in i..self.n {
                out.set(i, j, f(self.get(i, j)));
            }
        }
        out
    }

    /// Same matrix with simultaneous row/column permutation: `out[i][j] = self[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<SymmetricMatrix> {
        if perm.len() != self.n {
            return Err(Error::input("permutation length does not match matrix order"));
        }
        Self::from_upper_fn(self.n, |i, j| self.get(perm[i], perm[j]))
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub(crate) fn check_same_order(&self, other: &SymmetricMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::input(format!(
                "matrix order mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for SymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymmetricMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

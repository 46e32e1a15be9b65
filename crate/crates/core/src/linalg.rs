//! Symmetric eigendecomposition, rank-`d` truncation and adjacency spectral
//! embedding.
//!
//! The eigensolver is a cyclic Jacobi iteration. It is `O(n^3)` per sweep and
//! converges in a handful of sweeps for the matrix orders used here (a few
//! hundred vertices).

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Convergence threshold on `off(A) / ||A||_F`.
pub const JACOBI_TOL: f64 = 1e-12;

/// Full spectrum of a symmetric matrix.
///
/// Eigenvalues are sorted in non-increasing algebraic order and the
/// eigenvector for `values[k]` is `vector(k)`. Each eigenvector is signed so
/// that its largest-magnitude entry (lowest index on ties) is positive.
#[derive(Debug, Clone)]
pub struct EigenPair {
    n: usize,
    values: Vec<f64>,
    // column-major: vector k occupies vectors[k*n..(k+1)*n]
    vectors: Vec<f64>,
}

impl EigenPair {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }

    /// `sum_k s_k u_k u_k^T` over the first `d` eigenpairs.
    pub fn reconstruct(&self, d: usize) -> SymmetricMatrix {
        let n = self.n;
        SymmetricMatrix::from_upper_fn(n, |i, j| {
            (0..d)
                .map(|k| {
                    let u = self.vector(k);
                    self.values[k] * u[i] * u[j]
                })
                .sum()
        })
        .expect("order checked at construction")
    }
}

/// Computes all eigenpairs of `a` with cyclic Jacobi rotations.
pub fn eig_sym(a: &SymmetricMatrix) -> Result<EigenPair> {
    if !a.is_finite() {
        return Err(Error::input("matrix has non-finite entries"));
    }
    let n = a.n();
    let mut m = a.as_slice().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let norm = a.frobenius_norm();
    let target = JACOBI_TOL * norm;
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&m, n);
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, n, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&m, n) > target {
        return Err(Error::NoConvergence {
            what: "Jacobi eigensolver",
            iterations: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their index order
    order.sort_by(|&x, &y| m[y * n + y].total_cmp(&m[x * n + x]));

    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        values.push(m[k * n + k]);
        let col = &v[k * n..(k + 1) * n];
        let mut pivot = 0;
        for (i, x) in col.iter().enumerate() {
            if x.abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        vectors.extend(col.iter().map(|x| sign * x));
    }
    Ok(EigenPair { n, values, vectors })
}

fn off_diagonal_norm(m: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += 2.0 * m[i * n + j] * m[i * n + j];
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `m[p][q]`. `m` is row-major and kept
/// symmetric; `v` holds eigenvector columns contiguously.
#[inline]
fn rotate(m: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = m[p * n + p];
    let aqq = m[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    if t == 0.0 {
        m[p * n + q] = 0.0;
        m[q * n + p] = 0.0;
        return;
    }
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[p * n + k];
        let akq = m[q * n + k];
        let np = c * akp - s * akq;
        let nq = s * akp + c * akq;
        m[p * n + k] = np;
        m[k * n + p] = np;
        m[q * n + k] = nq;
        m[k * n + q] = nq;
    }
    m[p * n + p] = app - t * apq;
    m[q * n + q] = aqq + t * apq;
    m[p * n + q] = 0.0;
    m[q * n + p] = 0.0;

    let (head, tail) = v.split_at_mut(q * n);
    let vp = &mut head[p * n..(p + 1) * n];
    let vq = &mut tail[..n];
    for (xp, xq) in vp.iter_mut().zip(vq.iter_mut()) {
        let (a, b) = (*xp, *xq);
        *xp = c * a - s * b;
        *xq = s * a + c * b;
    }
}

fn check_dim(n: usize, d: usize) -> Result<()> {
    if d == 0 || d > n {
        return Err(Error::input(format!(
            "dimension {d} is outside 1..={n}"
        )));
    }
    Ok(())
}

/// Rank-`d` approximation `U S U^T` from the `d` algebraically largest
/// eigenvalues of `a`. Negative kept eigenvalues are retained as they are.
pub fn lowrank_d(a: &SymmetricMatrix, d: usize) -> Result<SymmetricMatrix> {
    check_dim(a.n(), d)?;
    Ok(eig_sym(a)?.reconstruct(d))
}

/// Per-vertex latent coordinates, one row of length `d` per vertex.
#[derive(Debug, Clone)]
pub struct LatentPositions {
    n: usize,
    d: usize,
    coords: Vec<f64>,
}

impl LatentPositions {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.coords[i * self.d + k]).collect()
    }

    /// `X X^T`.
    pub fn gram(&self) -> SymmetricMatrix {
        SymmetricMatrix::from_upper_fn(self.n, |i, j| {
            self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum()
        })
        .expect("n >= 2")
    }
}

/// Adjacency spectral embedding `X = U S^{1/2}` of dimension `d`.
///
/// Fails with [`Error::NegativeEigenvalue`] when one of the `d` largest
/// eigenvalues is negative, since its square root is undefined.
pub fn ase_embed(a: &SymmetricMatrix, d: usize) -> Result<LatentPositions> {
    check_dim(a.n(), d)?;
    let eig = eig_sym(a)?;
    embed_from_eig(&eig, d)
}

pub fn embed_from_eig(eig: &EigenPair, d: usize) -> Result<LatentPositions> {
    let n = eig.n();
    check_dim(n, d)?;
    // rounding noise on an exactly zero eigenvalue is not a real negative
    let floor = -1e-12 * eig.values()[0].abs().max(1.0);
    let mut scales = Vec::with_capacity(d);
    for (k, &s) in eig.values()[..d].iter().enumerate() {
        if s < floor {
            return Err(Error::NegativeEigenvalue { index: k, value: s });
        }
        scales.push(s.max(0.0).sqrt());
    }
    let mut coords = vec![0.0; n * d];
    for (k, scale) in scales.iter().enumerate() {
        for (i, u) in eig.vector(k).iter().enumerate() {
            coords[i * d + k] = u * scale;
        }
    }
    Ok(LatentPositions { n, d, coords })
}

//! Low-rank refinement of an entry-wise estimate.
//!
//! Steps: entry-wise estimate, dimension selection, diagonal augmentation,
//! rank-`d` truncation, then clamping negative entries to zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{estimate_matrix, truncate_estimate, QParam};
use crate::linalg::{eig_sym, lowrank_d};
use crate::matrix::SymmetricMatrix;
use crate::model::{RBound, WeightFamily};

/// Default number of elbows walked by the automatic dimension rule.
pub const DEFAULT_ELBOW: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimMode {
    Fixed(usize),
    /// Use the `k`-th Zhu–Ghodsi elbow of the scree.
    Elbow(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Augmentation {
    None,
    /// Row averages on the diagonal, followed by one refresh from the
    /// rank-`d` approximation.
    MarchetteScheinerman,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub q: QParam,
    pub dim_mode: DimMode,
    pub augmentation: Augmentation,
    pub clamp_negative: bool,
    pub truncation: Option<RBound>,
}

impl PipelineConfig {
    pub fn new(q: QParam, dim_mode: DimMode) -> Self {
        PipelineConfig {
            q,
            dim_mode,
            augmentation: Augmentation::MarchetteScheinerman,
            clamp_negative: true,
            truncation: None,
        }
    }

    pub fn with_q(mut self, q: QParam) -> Self {
        self.q = q;
        self
    }
}

/// Result of dimension selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimSelection {
    /// Candidate dimensions, strictly increasing.
    pub elbows: Vec<usize>,
    pub chosen: usize,
    /// Profile log-likelihood of each split point `1..len` in the first pass.
    pub profile_loglik: Vec<f64>,
}

impl DimSelection {
    pub fn fixed(d: usize) -> Self {
        DimSelection {
            elbows: vec![d],
            chosen: d,
            profile_loglik: Vec::new(),
        }
    }
}

/// Step one of the augmentation: each diagonal entry becomes the mean of the
/// off-diagonal entries in its row.
pub fn marchette_diagonal(a: &SymmetricMatrix) -> SymmetricMatrix {
    let n = a.n();
    let diag: Vec<f64> = (0..n)
        .map(|i| {
            let s: f64 = a.row(i).iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v).sum();
            s / (n - 1) as f64
        })
        .collect();
    let mut out = a.clone();
    out.set_diagonal(&diag);
    out
}

/// Row-average diagonal, then one step replacing the diagonal with that of
/// its rank-`d` approximation. Off-diagonal entries are never touched.
pub fn augment_diagonal(a: &SymmetricMatrix, d: usize) -> Result<SymmetricMatrix> {
    if d == 0 || d > a.n() {
        return Err(Error::input(format!("dimension {d} is outside 1..={}", a.n())));
    }
    let mut out = marchette_diagonal(a);
    let approx = lowrank_d(&out, d)?;
    out.set_diagonal(&approx.diagonal());
    Ok(out)
}

/// Profile log-likelihood of splitting `x` after position `split` into two
/// Gaussian groups with their own means and a pooled ML variance.
pub fn profile_loglik(x: &[f64], split: usize) -> f64 {
    let len = x.len() as f64;
    let ss = |part: &[f64]| {
        let mu = part.iter().sum::<f64>() / part.len() as f64;
        part.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>()
    };
    let var = (ss(&x[..split]) + ss(&x[split..])) / len;
    if var == 0.0 {
        return f64::INFINITY;
    }
    -0.5 * len * (2.0 * std::f64::consts::PI * var).ln() - 0.5 * len
}

/// Best split of a non-increasing list; returns the split and the profile.
fn best_split(x: &[f64]) -> (usize, Vec<f64>) {
    if x.iter().all(|&v| v == x[0]) {
        return (1, vec![f64::NEG_INFINITY; x.len() - 1]);
    }
    let profile: Vec<f64> = (1..x.len()).map(|s| profile_loglik(x, s)).collect();
    let mut best = 0;
    for (k, &v) in profile.iter().enumerate() {
        if v > profile[best] {
            best = k;
        }
    }
    (best + 1, profile)
}

/// Zhu–Ghodsi elbows of a scree.
///
/// The first elbow maximizes the two-group profile likelihood over all split
/// points; each further elbow is the first elbow of the tail that follows the
/// previous one. Ties go to the smallest split. `chosen` is elbow number
/// `num_elbows`.
pub fn zhu_ghodsi_elbows(eigs: &[f64], num_elbows: usize) -> Result<DimSelection> {
    if num_elbows == 0 {
        return Err(Error::input("need at least one elbow"));
    }
    if eigs.len() < num_elbows + 1 {
        return Err(Error::input(format!(
            "{} eigenvalues cannot give {num_elbows} elbows",
            eigs.len()
        )));
    }
    if eigs.iter().any(|v| !v.is_finite()) {
        return Err(Error::input("eigenvalues must be finite"));
    }
    if eigs.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::input("eigenvalues must be non-increasing"));
    }
    let mut elbows = Vec::with_capacity(num_elbows);
    let mut first_profile = Vec::new();
    let mut offset = 0;
    for k in 0..num_elbows {
        let tail = &eigs[offset..];
        if tail.len() < 2 {
            return Err(Error::input(format!(
                "only {k} elbows exist in a scree of length {}",
                eigs.len()
            )));
        }
        let (split, profile) = best_split(tail);
        if k == 0 {
            first_profile = profile;
        }
        offset += split;
        elbows.push(offset);
    }
    Ok(DimSelection {
        chosen: *elbows.last().expect("num_elbows >= 1"),
        elbows,
        profile_loglik: first_profile,
    })
}

/// Low-rank refinement of an existing entry-wise estimate `p_hat` (hollow).
pub fn refine_estimate(
    p_hat: &SymmetricMatrix,
    cfg: &PipelineConfig,
) -> Result<(SymmetricMatrix, DimSelection)> {
    let n = p_hat.n();
    let selection = match cfg.dim_mode {
        DimMode::Fixed(d) => {
            if d == 0 || d > n {
                return Err(Error::input(format!("dimension {d} is outside 1..={n}")));
            }
            DimSelection::fixed(d)
        }
        DimMode::Elbow(k) => {
            let scree_source = match cfg.augmentation {
                Augmentation::MarchetteScheinerman => marchette_diagonal(p_hat),
                Augmentation::None => p_hat.clone(),
            };
            let eig = eig_sym(&scree_source)?;
            zhu_ghodsi_elbows(eig.values(), k)?
        }
    };
    let d = selection.chosen;
    let augmented = match cfg.augmentation {
        Augmentation::MarchetteScheinerman => augment_diagonal(p_hat, d)?,
        Augmentation::None => p_hat.clone(),
    };
    let mut q = lowrank_d(&augmented, d)?;
    if cfg.clamp_negative {
        q = q.map(|v| v.max(0.0));
    }
    if let Some(r) = cfg.truncation {
        q = truncate_estimate(&q, p_hat, r)?;
    }
    Ok((q, selection))
}

/// Entry-wise estimate followed by its low-rank refinement.
pub fn low_rank_estimate(
    graphs: &[SymmetricMatrix],
    cfg: &PipelineConfig,
    family: WeightFamily,
) -> Result<(SymmetricMatrix, DimSelection)> {
    let p_hat = estimate_matrix(graphs, cfg.q, family)?;
    refine_estimate(&p_hat, cfg)
}

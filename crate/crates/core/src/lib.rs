//! Robust low-rank estimation of the mean of a population of weighted graphs.
//!
//! Given `m` weighted graphs on a common vertex set, drawn from a weighted
//! stochastic blockmodel whose edges are occasionally replaced by gross
//! errors, the crate computes four estimates of the edge-parameter matrix:
//!
//! * the entry-wise MLE (sample mean),
//! * the entry-wise maximum Lq-likelihood estimate (MLqE), which down-weights
//!   observations that fit poorly,
//! * and the low-rank refinements of each, obtained by diagonal augmentation
//!   and a rank-`d` eigen-truncation.
//!
//! Module map:
//!
//! * [`matrix`], [`linalg`]: symmetric storage, Jacobi eigensolver, rank-`d`
//!   truncation and spectral embedding.
//! * [`model`], [`rng`]: contaminated blockmodel samplers with keyed streams.
//! * [`estimate`]: MLE, MLqE and the population MLq root.
//! * [`pipeline`]: augmentation, elbow-based dimension selection and the
//!   full low-rank estimator.
//! * [`eval`]: Monte Carlo harness and variance probes.
//! * [`io`], [`cli`]: files and the command-line commands.

pub mod cli;
pub mod error;
pub mod estimate;
pub mod eval;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod model;
pub mod pipeline;
pub mod rng;

pub use error::{Error, Result};
pub use estimate::{
    estimate_matrix, mle_entry, mlqe_exponential, mlqe_poisson, population_mlq_root,
    truncate_estimate, EdgeSample, QParam,
};
pub use eval::{mse_offdiag, run_cell, run_experiment, Estimator, McConfig, McResult};
pub use linalg::{ase_embed, eig_sym, lowrank_d, EigenPair, LatentPositions};
pub use matrix::SymmetricMatrix;
pub use model::{
    build_p, sample_graph, sample_population, sample_tau, BlockAssignment, ContaminationSpec,
    RBound, WeightFamily, WsbmSpec,
};
pub use pipeline::{
    augment_diagonal, low_rank_estimate, zhu_ghodsi_elbows, Augmentation, DimMode, DimSelection,
    PipelineConfig,
};
pub use rng::Stream;

//! Monte Carlo comparison of the four estimators.
//!
//! Each `(cell, replicate)` pair draws one population from a seed derived
//! from the base seed and the grid coordinates, and evaluates every estimator
//! on that same draw. Results are folded in grid order, so output does not
//! depend on how many threads ran the replicates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{estimate_matrix, QParam};
use crate::matrix::SymmetricMatrix;
use crate::model::{build_c, build_p, sample_graphs, sample_population, sample_tau, ContaminationSpec, WsbmSpec};
use crate::pipeline::{refine_estimate, PipelineConfig};
use crate::rng::{derive_seed, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Estimator {
    Mle,
    Mlqe,
    AseMle,
    AseMlqe,
}

impl Estimator {
    pub const ALL: [Estimator; 4] = [
        Estimator::Mle,
        Estimator::Mlqe,
        Estimator::AseMle,
        Estimator::AseMlqe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::Mle => "mle",
            Estimator::Mlqe => "mlqe",
            Estimator::AseMle => "ase_mle",
            Estimator::AseMlqe => "ase_mlqe",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Mean squared error over the strict upper triangle.
pub fn mse_offdiag(estimate: &SymmetricMatrix, truth: &SymmetricMatrix) -> Result<f64> {
    estimate.check_same_order(truth)?;
    let n = estimate.n();
    let mut sum = 0.0;
    for i in 0..n {
        let (er, tr) = (estimate.row(i), truth.row(i));
        for j in (i + 1)..n {
            let d = er[j] - tr[j];
            sum += d * d;
        }
    }
    Ok(sum / (n * (n - 1) / 2) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub epsilons: Vec<f64>,
    pub qs: Vec<f64>,
    pub ns: Vec<usize>,
    pub ms: Vec<usize>,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.epsilons.len() * self.qs.len() * self.ns.len() * self.ms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cells in order: epsilon outermost, then q, n, m.
    pub fn cells(&self) -> Vec<CellIndex> {
        let mut out = Vec::with_capacity(self.len());
        for e in 0..self.epsilons.len() {
            for q in 0..self.qs.len() {
                for n in 0..self.ns.len() {
                    for m in 0..self.ms.len() {
                        out.push(CellIndex { epsilon: e, q, n, m });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellIndex {
    pub epsilon: usize,
    pub q: usize,
    pub n: usize,
    pub m: usize,
}

/// A full experiment. The contamination template supplies `B'`; its epsilon
/// is replaced by each grid value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub spec: WsbmSpec,
    pub contamination: ContaminationSpec,
    pub grid: Grid,
    pub replicates: usize,
    pub base_seed: u64,
    pub pipeline: PipelineConfig,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.epsilons.is_empty() || g.qs.is_empty() || g.ns.is_empty() || g.ms.is_empty() {
            return Err(Error::input("every grid axis needs at least one value"));
        }
        if self.replicates == 0 {
            return Err(Error::input("replicates must be at least 1"));
        }
        if self.contamination.b_prime().len() != self.spec.blocks() {
            return Err(Error::input("B and B' must have the same number of blocks"));
        }
        for &e in &g.epsilons {
            self.contamination.with_epsilon(e)?;
        }
        for &q in &g.qs {
            QParam::new(q)?;
        }
        if let Some(&n) = g.ns.iter().find(|&&n| n < 2) {
            return Err(Error::input(format!("n = {n} must be at least 2")));
        }
        if g.ms.contains(&0) {
            return Err(Error::input("m must be at least 1"));
        }
        Ok(())
    }

    pub fn cell_seed(&self, cell: CellIndex, replicate: usize) -> u64 {
        derive_seed(&[
            self.base_seed,
            cell.epsilon as u64,
            cell.q as u64,
            cell.n as u64,
            cell.m as u64,
            replicate as u64,
        ])
    }
}

/// One replicate of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellOutcome {
    /// Indexed by [`Estimator::index`].
    pub mse: [f64; 4],
    /// Digest of the graphs every estimator consumed.
    pub draw_digest: u64,
}

pub fn run_cell(cfg: &McConfig, cell: CellIndex, replicate: usize) -> Result<CellOutcome> {
    let g = &cfg.grid;
    let (epsilon, q, n, m) = (
        g.epsilons[cell.epsilon],
        g.qs[cell.q],
        g.ns[cell.n],
        g.ms[cell.m],
    );
    let wrap = |e: Error| Error::Cell {
        epsilon,
        q,
        n,
        m,
        replicate,
        source: Box::new(e),
    };
    let inner = || -> Result<CellOutcome> {
        let cont = cfg.contamination.with_epsilon(epsilon)?;
        let q = QParam::new(q)?;
        let stream = Stream::new(cfg.cell_seed(cell, replicate));
        let pop = sample_population(&cfg.spec, &cont, n, m, stream)?;
        let family = cfg.spec.family();

        let mle = estimate_matrix(&pop.graphs, QParam::MLE, family)?;
        let mlqe = estimate_matrix(&pop.graphs, q, family)?;
        let (ase_mle, _) = refine_estimate(&mle, &cfg.pipeline.with_q(QParam::MLE))?;
        let (ase_mlqe, _) = refine_estimate(&mlqe, &cfg.pipeline.with_q(q))?;

        let mut mse = [0.0; 4];
        for (slot, est) in mse.iter_mut().zip([&mle, &mlqe, &ase_mle, &ase_mlqe]) {
            *slot = mse_offdiag(est, &pop.p)?;
        }
        Ok(CellOutcome {
            mse,
            draw_digest: pop.digest(),
        })
    };
    inner().map_err(wrap)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorStats {
    pub mse_mean: f64,
    /// Standard error of `mse_mean` (zero with a single replicate).
    pub mse_se: f64,
    pub replicates: usize,
}

impl EstimatorStats {
    fn from_samples(x: &[f64]) -> Self {
        let r = x.len();
        let mean = x.iter().sum::<f64>() / r as f64;
        let se = if r > 1 {
            let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r - 1) as f64;
            (var / r as f64).sqrt()
        } else {
            0.0
        };
        EstimatorStats {
            mse_mean: mean,
            mse_se: se,
            replicates: r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub index: CellIndex,
    pub epsilon: f64,
    pub q: f64,
    pub n: usize,
    pub m: usize,
    pub stats: [EstimatorStats; 4],
    /// Per-replicate MSEs in replicate order.
    pub replicate_mse: Vec<[f64; 4]>,
}

impl CellSummary {
    pub fn stats_for(&self, e: Estimator) -> EstimatorStats {
        self.stats[e.index()]
    }

    /// Fraction of replicates where estimator `a` has strictly smaller MSE than `b`.
    pub fn win_fraction(&self, a: Estimator, b: Estimator) -> f64 {
        let wins = self
            .replicate_mse
            .iter()
            .filter(|r| r[a.index()] < r[b.index()])
            .count();
        wins as f64 / self.replicate_mse.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub cells: Vec<CellSummary>,
}

impl McResult {
    pub fn cell(&self, index: CellIndex) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.index == index)
    }
}

/// Runs every cell and replicate on the current rayon pool.
pub fn run_experiment(cfg: &McConfig) -> Result<McResult> {
    cfg.validate()?;
    let cells = cfg.grid.cells();
    let r = cfg.replicates;
    let tasks: Vec<(CellIndex, usize)> = cells
        .iter()
        .flat_map(|&c| (0..r).map(move |k| (c, k)))
        .collect();
    let outcomes: Vec<Result<CellOutcome>> = tasks
        .par_iter()
        .map(|&(c, k)| run_cell(cfg, c, k))
        .collect();

    let mut summaries = Vec::with_capacity(cells.len());
    let mut it = outcomes.into_iter();
    for &index in &cells {
        let mut reps = Vec::with_capacity(r);
        for _ in 0..r {
            reps.push(it.next().expect("one outcome per task")?.mse);
        }
        let stats = std::array::from_fn(|e| {
            let col: Vec<f64> = reps.iter().map(|x| x[e]).collect();
            EstimatorStats::from_samples(&col)
        });
        summaries.push(CellSummary {
            index,
            epsilon: cfg.grid.epsilons[index.epsilon],
            q: cfg.grid.qs[index.q],
            n: cfg.grid.ns[index.n],
            m: cfg.grid.ms[index.m],
            stats,
            replicate_mse: reps,
        });
    }
    Ok(McResult { cells: summaries })
}

/// Runs the experiment on a dedicated pool of `threads` workers.
pub fn run_experiment_with_threads(cfg: &McConfig, threads: usize) -> Result<McResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::input(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_experiment(cfg))
}

/// Variance of the refined estimate relative to the entry-wise one at a
/// tracked edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceRatio {
    pub n: usize,
    pub edge: (usize, usize),
    /// `Var(refined MLE) / Var(MLE)`.
    pub mle_ratio: f64,
    /// `Var(refined MLqE) / Var(MLqE)`, when an MLqE pair was requested.
    pub mlqe_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceProbe {
    pub spec: WsbmSpec,
    pub contamination: ContaminationSpec,
    /// MLqE pair to track alongside the MLE pair.
    pub q: Option<QParam>,
    pub ns: Vec<usize>,
    pub m: usize,
    pub replicates: usize,
    pub seed: u64,
    pub pipeline: PipelineConfig,
}

fn sample_variance(x: &[f64]) -> f64 {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (x.len() - 1) as f64
}

/// For each `n`, draws one block assignment, holds it fixed, and measures the
/// replicate variance of the estimators at the first within-block-0 pair.
pub fn variance_ratio_probe(probe: &VarianceProbe) -> Result<Vec<VarianceRatio>> {
    if probe.ns.len() < 2 || probe.ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::input("n values must be strictly increasing, at least two"));
    }
    if probe.replicates < 2 {
        return Err(Error::input("variance needs at least 2 replicates"));
    }
    let family = probe.spec.family();
    probe
        .ns
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let stream = Stream::new(derive_seed(&[probe.seed, k as u64, n as u64]));
            let tau = sample_tau(&probe.spec, n, stream.child(0))?;
            let (i, j) = tau
                .first_pair_in_block(0)
                .ok_or_else(|| Error::input(format!("n = {n}: block 0 has fewer than two vertices")))?;
            let p = build_p(&probe.spec, &tau)?;
            let c = build_c(&probe.contamination, &tau)?;
            let eps = probe.contamination.epsilon();
            let draws: Vec<[f64; 4]> = (0..probe.replicates)
                .into_par_iter()
                .map(|r| -> Result<[f64; 4]> {
                    let graphs = sample_graphs(&p, &c, eps, family, probe.m, stream.child(1 + r as u64))?;
                    let mle = estimate_matrix(&graphs, QParam::MLE, family)?;
                    let (ase_mle, _) = refine_estimate(&mle, &probe.pipeline.with_q(QParam::MLE))?;
                    let mut out = [mle.get(i, j), ase_mle.get(i, j), f64::NAN, f64::NAN];
                    if let Some(q) = probe.q {
                        let mlqe = estimate_matrix(&graphs, q, family)?;
                        let (ase_mlqe, _) = refine_estimate(&mlqe, &probe.pipeline.with_q(q))?;
                        out[2] = mlqe.get(i, j);
                        out[3] = ase_mlqe.get(i, j);
                    }
                    Ok(out)
                })
                .collect::<Result<_>>()?;
            let col = |e: usize| draws.iter().map(|d| d[e]).collect::<Vec<_>>();
            let mle_ratio = sample_variance(&col(1)) / sample_variance(&col(0));
            let mlqe_ratio = probe
                .q
                .map(|_| sample_variance(&col(3)) / sample_variance(&col(2)));
            Ok(VarianceRatio {
                n,
                edge: (i, j),
                mle_ratio,
                mlqe_ratio,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mse_examples() {
        let t = SymmetricMatrix::zeros(3).unwrap();
        assert_eq!(mse_offdiag(&t, &t).unwrap(), 0.0);
        let ones = SymmetricMatrix::from_upper_fn(3, |_, _| 1.0).unwrap();
        assert_eq!(mse_offdiag(&ones, &t).unwrap(), 1.0);
        let mut a = SymmetricMatrix::zeros(2).unwrap();
        let mut b = SymmetricMatrix::zeros(2).unwrap();
        a.set(0, 1, 5.0);
        b.set(0, 1, 3.0);
        a.set(0, 0, 100.0);
        assert_eq!(mse_offdiag(&a, &b).unwrap(), 4.0);
        assert!(mse_offdiag(&a, &t).is_err());
    }

    #[test]
    fn stats_single_replicate() {
        let s = EstimatorStats::from_samples(&[2.5]);
        assert_eq!(s.mse_mean, 2.5);
        assert_eq!(s.mse_se, 0.0);
    }

    #[test]
    fn grid_order() {
        let g = Grid {
            epsilons: vec![0.0, 0.1],
            qs: vec![0.9],
            ns: vec![10, 20],
            ms: vec![5],
        };
        let cells = g.cells();
        assert_eq!(cells.len(), 4);
        assert_eq!(cells[1], CellIndex { epsilon: 0, q: 0, n: 1, m: 0 });
        assert_eq!(cells[2], CellIndex { epsilon: 1, q: 0, n: 0, m: 0 });
    }
}

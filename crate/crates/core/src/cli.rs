//! The `simulate`, `estimate` and `scree` commands as library calls.
//!
//! The binary only parses flags and maps errors to exit codes; everything
//! else lives here so it can be tested without spawning a process.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::estimate::{estimate_matrix, QParam};
use crate::eval::{run_experiment_with_threads, CellIndex};
use crate::io::{
    read_graph_dir, write_dense_file, write_mse_csv, write_scree_csv, ConfigFile, EstimateSidecar,
    GraphFileFormat, RunManifest,
};
use crate::linalg::eig_sym;
use crate::matrix::SymmetricMatrix;
use crate::model::{sample_population, RBound, WeightFamily};
use crate::pipeline::{marchette_diagonal, refine_estimate, Augmentation, DimMode, DimSelection, PipelineConfig};
use crate::rng::Stream;

pub const THREADS_ENV: &str = "GRE_THREADS";

/// Worker count from `GRE_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        None => f(),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::input(format!("cannot build thread pool: {e}")))?
            .install(f),
    }
}

#[derive(Debug, Clone)]
pub struct SimulateOptions {
    pub config: PathBuf,
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub replicates: Option<usize>,
    pub threads: Option<usize>,
    /// Also write the first replicate of the first cell as dense graph files.
    pub dump_graphs: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct SimulateReport {
    pub mse_csv: PathBuf,
    pub manifest: PathBuf,
    pub rows: usize,
}

pub fn simulate(opts: &SimulateOptions) -> Result<SimulateReport> {
    let text = fs::read_to_string(&opts.config).map_err(|e| Error::Format {
        path: opts.config.clone(),
        line: None,
        message: e.to_string(),
    })?;
    let file = ConfigFile::parse(&text)?;
    let mut cfg = file.to_mc_config()?;
    if let Some(s) = opts.seed {
        cfg.base_seed = s;
    }
    if let Some(r) = opts.replicates {
        if r == 0 {
            return Err(Error::input("replicates must be at least 1"));
        }
        cfg.replicates = r;
    }

    let threads = opts.threads.unwrap_or_else(rayon::current_num_threads);
    let result = run_experiment_with_threads(&cfg, threads)?;

    fs::create_dir_all(&opts.out_dir)?;
    let mse_csv = opts.out_dir.join("mse.csv");
    let mut buf = Vec::new();
    write_mse_csv(&mut buf, &result)?;
    fs::write(&mse_csv, buf)?;

    let mut outputs = vec![mse_csv.clone()];
    if let Some(dir) = &opts.dump_graphs {
        outputs.extend(dump_first_population(&cfg, dir, &opts.out_dir)?);
    }

    let manifest = opts.out_dir.join("manifest.json");
    let m = RunManifest::new(file.digest(), cfg.base_seed, outputs);
    fs::write(
        &manifest,
        serde_json::to_string_pretty(&m).map_err(|e| Error::input(e.to_string()))?,
    )?;
    Ok(SimulateReport {
        mse_csv,
        manifest,
        rows: result.cells.len() * 4,
    })
}

/// Writes the population of cell 0 / replicate 0 to `dir` (one file per
/// graph) and its parameter matrix to `truth.tsv` in `out_dir`.
fn dump_first_population(cfg: &crate::eval::McConfig, dir: &Path, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let cell = CellIndex { epsilon: 0, q: 0, n: 0, m: 0 };
    let cont = cfg.contamination.with_epsilon(cfg.grid.epsilons[0])?;
    let stream = Stream::new(cfg.cell_seed(cell, 0));
    let pop = sample_population(&cfg.spec, &cont, cfg.grid.ns[0], cfg.grid.ms[0], stream)?;
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (t, g) in pop.graphs.iter().enumerate() {
        let path = dir.join(format!("graph_{t:04}.tsv"));
        write_dense_file(&path, g)?;
        written.push(path);
    }
    let truth = out_dir.join("truth.tsv");
    write_dense_file(&truth, &pop.p)?;
    written.push(truth);
    Ok(written)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimArg {
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for DimArg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(DimArg::Auto);
        }
        s.parse()
            .map(DimArg::Fixed)
            .map_err(|_| Error::input(format!("--dim expects 'auto' or an integer, got '{s}'")))
    }
}

#[derive(Debug, Clone)]
pub struct EstimateOptions {
    pub graph_dir: PathBuf,
    pub format: GraphFileFormat,
    pub family: WeightFamily,
    pub q: f64,
    pub dim: DimArg,
    pub elbow: usize,
    pub augmentation: Augmentation,
    pub clamp_negative: bool,
    pub truncate: Option<f64>,
    /// Write the entry-wise estimate instead of its low-rank refinement.
    pub entrywise: bool,
    pub out: PathBuf,
    pub threads: Option<usize>,
}

impl EstimateOptions {
    pub fn new(graph_dir: PathBuf, format: GraphFileFormat, out: PathBuf) -> Self {
        EstimateOptions {
            graph_dir,
            format,
            family: WeightFamily::Exponential,
            q: 1.0,
            dim: DimArg::Auto,
            elbow: crate::pipeline::DEFAULT_ELBOW,
            augmentation: Augmentation::MarchetteScheinerman,
            clamp_negative: true,
            truncate: None,
            entrywise: false,
            out,
            threads: None,
        }
    }

    pub fn pipeline(&self) -> Result<PipelineConfig> {
        let q = QParam::new(self.q)?;
        let dim_mode = match self.dim {
            DimArg::Auto => DimMode::Elbow(self.elbow),
            DimArg::Fixed(d) => DimMode::Fixed(d),
        };
        let mut cfg = PipelineConfig::new(q, dim_mode);
        cfg.augmentation = self.augmentation;
        cfg.clamp_negative = self.clamp_negative;
        cfg.truncation = self.truncate.map(RBound::new).transpose()?;
        Ok(cfg)
    }
}

/// Path of the JSON sidecar written next to an estimate.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".json");
    PathBuf::from(s)
}

pub fn estimate(opts: &EstimateOptions) -> Result<(SymmetricMatrix, DimSelection)> {
    let cfg = opts.pipeline()?;
    with_threads(opts.threads, || {
        let graphs = read_graph_dir(&opts.graph_dir, opts.format)?;
        let p_hat = estimate_matrix(&graphs, cfg.q, opts.family)?;
        let (est, sel) = if opts.entrywise {
            (p_hat, DimSelection::fixed(0))
        } else {
            refine_estimate(&p_hat, &cfg)?
        };
        if let Some(parent) = opts.out.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        write_dense_file(&opts.out, &est)?;
        let sidecar = EstimateSidecar {
            estimator: match (opts.entrywise, cfg.q.is_mle()) {
                (true, true) => "mle",
                (true, false) => "mlqe",
                (false, true) => "ase_mle",
                (false, false) => "ase_mlqe",
            }
            .to_string(),
            family: opts.family.to_string(),
            q: cfg.q.value(),
            graphs: graphs.len(),
            n: est.n(),
            chosen_dimension: sel.chosen,
            elbows: sel.elbows.clone(),
            profile_loglik: EstimateSidecar::profile(&sel),
        };
        fs::write(
            sidecar_path(&opts.out),
            serde_json::to_string_pretty(&sidecar).map_err(|e| Error::input(e.to_string()))?,
        )?;
        Ok((est, sel))
    })
}

#[derive(Debug, Clone)]
pub struct ScreeOptions {
    pub graph_dir: PathBuf,
    pub format: GraphFileFormat,
    pub out: PathBuf,
    pub threads: Option<usize>,
}

/// Eigenvalues of the row-average-augmented mean graph, non-increasing.
pub fn scree(opts: &ScreeOptions) -> Result<Vec<f64>> {
    with_threads(opts.threads, || {
        let graphs = read_graph_dir(&opts.graph_dir, opts.format)?;
        let eigs = scree_values(&graphs)?;
        if let Some(parent) = opts.out.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        let mut buf = Vec::new();
        write_scree_csv(&mut buf, &eigs)?;
        fs::write(&opts.out, buf)?;
        Ok(eigs)
    })
}

pub fn scree_values(graphs: &[SymmetricMatrix]) -> Result<Vec<f64>> {
    let mean = estimate_matrix(graphs, QParam::MLE, WeightFamily::Exponential)?;
    let eig = eig_sym(&marchette_diagonal(&mean))?;
    let eigs = eig.values().to_vec();
    if eigs[0] <= 0.0 {
        return Err(Error::input(
            "largest eigenvalue of the mean graph is not positive; cannot normalize",
        ));
    }
    Ok(eigs)
}

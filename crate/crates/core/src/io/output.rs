//! CSV and manifest writers.

use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::eval::{Estimator, McResult};
use crate::pipeline::DimSelection;

pub const MSE_HEADER: &str = "epsilon,q,n,m,estimator,mse_mean,mse_se,replicates";
pub const SCREE_HEADER: &str = "index,eigenvalue,normalized";

/// One row per cell and estimator, cells in grid order.
pub fn write_mse_csv(mut w: impl Write, result: &McResult) -> Result<()> {
    writeln!(w, "{MSE_HEADER}")?;
    for cell in &result.cells {
        for e in Estimator::ALL {
            let s = cell.stats_for(e);
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                cell.epsilon,
                cell.q,
                cell.n,
                cell.m,
                e.name(),
                s.mse_mean,
                s.mse_se,
                s.replicates
            )?;
        }
    }
    Ok(())
}

/// Eigenvalues in the given (non-increasing) order with their ratio to the
/// first one.
pub fn write_scree_csv(mut w: impl Write, eigenvalues: &[f64]) -> Result<()> {
    writeln!(w, "{SCREE_HEADER}")?;
    let top = eigenvalues.first().copied().unwrap_or(1.0);
    for (k, &s) in eigenvalues.iter().enumerate() {
        writeln!(w, "{},{},{}", k + 1, s, s / top)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_digest: String,
    pub base_seed: u64,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(config_digest: String, base_seed: u64, outputs: Vec<PathBuf>) -> Self {
        RunManifest {
            config_digest,
            base_seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            outputs,
        }
    }
}

/// Sidecar written next to an estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSidecar {
    pub estimator: String,
    pub family: String,
    pub q: f64,
    pub graphs: usize,
    pub n: usize,
    pub chosen_dimension: usize,
    pub elbows: Vec<usize>,
    /// Non-finite values are written as `null`.
    pub profile_loglik: Vec<Option<f64>>,
}

impl EstimateSidecar {
    pub fn profile(sel: &DimSelection) -> Vec<Option<f64>> {
        sel.profile_loglik
            .iter()
            .map(|&v| v.is_finite().then_some(v))
            .collect()
    }
}

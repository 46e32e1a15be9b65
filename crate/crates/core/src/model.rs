//! Contaminated weighted stochastic blockmodel: parameters and samplers.
//!
//! Edge weights follow a one-parameter family parameterized by its mean.
//! Each observed edge is drawn from the nominal mean `P[i][j]` with
//! probability `1 - epsilon` and from the contamination mean `C[i][j]`
//! otherwise. Contamination shares the block assignment of the nominal model.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;
use crate::rng::Stream;

/// Child-stream tags used by [`sample_population`].
pub const TAU_TAG: u64 = 0x7A75;
pub const GRAPH_TAG: u64 = 0x6772;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightFamily {
    /// Density `exp(-x / theta) / theta`.
    Exponential,
    /// `theta^x exp(-theta) / x!` on the nonnegative integers.
    Poisson,
}

impl WeightFamily {
    pub fn name(self) -> &'static str {
        match self {
            WeightFamily::Exponential => "exponential",
            WeightFamily::Poisson => "poisson",
        }
    }

    /// One draw with mean `theta > 0`.
    pub fn sample<R: Rng + ?Sized>(self, theta: f64, rng: &mut R) -> f64 {
        match self {
            WeightFamily::Exponential => Exp::new(1.0 / theta)
                .expect("positive mean")
                .sample(rng),
            WeightFamily::Poisson => Poisson::new(theta).expect("positive mean").sample(rng),
        }
    }
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exponential" | "exp" => Ok(WeightFamily::Exponential),
            "poisson" => Ok(WeightFamily::Poisson),
            other => Err(Error::input(format!("unknown weight family '{other}'"))),
        }
    }
}

fn check_block_matrix(name: &str, b: &[Vec<f64>]) -> Result<()> {
    let k = b.len();
    if k == 0 {
        return Err(Error::input(format!("{name} is empty")));
    }
    for (r, row) in b.iter().enumerate() {
        if row.len() != k {
            return Err(Error::input(format!("{name} is not square (row {r})")));
        }
        for (c, &v) in row.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::input(format!(
                    "{name}[{r}][{c}] = {v} must be finite and positive"
                )));
            }
            if b[c][r] != v {
                return Err(Error::input(format!("{name} is not symmetric at ({r}, {c})")));
            }
        }
    }
    Ok(())
}

fn max_entry(b: &[Vec<f64>]) -> f64 {
    b.iter().flatten().copied().fold(0.0, f64::max)
}

/// Nominal (uncontaminated) model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WsbmSpec {
    b: Vec<Vec<f64>>,
    rho: Vec<f64>,
    family: WeightFamily,
}

impl WsbmSpec {
    pub fn new(b: Vec<Vec<f64>>, rho: Vec<f64>, family: WeightFamily) -> Result<Self> {
        check_block_matrix("B", &b)?;
        if rho.len() != b.len() {
            return Err(Error::input(format!(
                "rho has {} entries but B has {} blocks",
                rho.len(),
                b.len()
            )));
        }
        if rho.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
            return Err(Error::input("block proportions must lie in (0, 1]"));
        }
        let total: f64 = rho.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::input(format!("block proportions sum to {total}, not 1")));
        }
        Ok(WsbmSpec { b, rho, family })
    }

    pub fn blocks(&self) -> usize {
        self.b.len()
    }

    pub fn b(&self) -> &[Vec<f64>] {
        &self.b
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn family(&self) -> WeightFamily {
        self.family
    }
}

/// Gross-error contamination: block means `B'` applied with probability `epsilon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContaminationSpec {
    b_prime: Vec<Vec<f64>>,
    epsilon: f64,
}

impl ContaminationSpec {
    pub fn new(b_prime: Vec<Vec<f64>>, epsilon: f64) -> Result<Self> {
        check_block_matrix("B'", &b_prime)?;
        check_epsilon(epsilon)?;
        Ok(ContaminationSpec { b_prime, epsilon })
    }

    pub fn b_prime(&self) -> &[Vec<f64>] {
        &self.b_prime
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(ContaminationSpec {
            b_prime: self.b_prime.clone(),
            epsilon,
        })
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::input(format!("epsilon = {epsilon} must lie in [0, 1)")));
    }
    Ok(())
}

/// Upper bound on every edge parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RBound(f64);

impl RBound {
    pub fn new(r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::input(format!("R = {r} must be finite and positive")));
        }
        Ok(RBound(r))
    }

    /// Smallest bound covering both block matrices.
    pub fn covering(spec: &WsbmSpec, cont: &ContaminationSpec) -> Self {
        RBound(max_entry(&spec.b).max(max_entry(&cont.b_prime)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn covers(self, spec: &WsbmSpec, cont: &ContaminationSpec) -> bool {
        self.0 >= max_entry(&spec.b) && self.0 >= max_entry(&cont.b_prime)
    }
}

/// Zero-based block label for each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockAssignment {
    labels: Vec<usize>,
    blocks: usize,
}

impl BlockAssignment {
    pub fn new(labels: Vec<usize>, blocks: usize) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::input("a block assignment needs at least 2 vertices"));
        }
        if let Some(bad) = labels.iter().find(|&&l| l >= blocks) {
            return Err(Error::input(format!("block label {bad} out of range for {blocks} blocks")));
        }
        Ok(BlockAssignment { labels, blocks })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// First two vertices (by index) that share `block`.
    pub fn first_pair_in_block(&self, block: usize) -> Option<(usize, usize)> {
        let mut it = self.labels.iter().enumerate().filter(|(_, &l)| l == block);
        let (i, _) = it.next()?;
        let (j, _) = it.next()?;
        Some((i, j))
    }
}

/// i.i.d. categorical block labels with probabilities `rho`.
pub fn sample_tau(spec: &WsbmSpec, n: usize, stream: Stream) -> Result<BlockAssignment> {
    if n < 2 {
        return Err(Error::input(format!("need at least 2 vertices, got {n}")));
    }
    let mut cumulative = Vec::with_capacity(spec.rho.len());
    let mut acc = 0.0;
    for r in &spec.rho {
        acc += r;
        cumulative.push(acc);
    }
    let last = spec.blocks() - 1;
    let mut rng = stream.rng();
    let labels = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            cumulative.iter().position(|&c| u < c).unwrap_or(last)
        })
        .collect();
    BlockAssignment::new(labels, spec.blocks())
}

fn expand_blocks(b: &[Vec<f64>], tau: &BlockAssignment) -> Result<SymmetricMatrix> {
    if tau.blocks() > b.len() {
        return Err(Error::input("block assignment uses more blocks than the block matrix"));
    }
    let l = tau.labels();
    SymmetricMatrix::from_upper_fn(tau.n(), |i, j| b[l[i]][l[j]])
}

/// Edge-parameter matrix `P[i][j] = B[tau_i][tau_j]`. The diagonal holds
/// `B[tau_i][tau_i]` for reference only.
pub fn build_p(spec: &WsbmSpec, tau: &BlockAssignment) -> Result<SymmetricMatrix> {
    expand_blocks(&spec.b, tau)
}

/// Contamination parameter matrix `C[i][j] = B'[tau_i][tau_j]`.
pub fn build_c(cont: &ContaminationSpec, tau: &BlockAssignment) -> Result<SymmetricMatrix> {
    expand_blocks(&cont.b_prime, tau)
}

/// One hollow symmetric graph from the contaminated model. `t` is the graph
/// index inside the population and selects the per-edge substreams.
pub fn sample_graph(
    p: &SymmetricMatrix,
    c: &SymmetricMatrix,
    epsilon: f64,
    family: WeightFamily,
    stream: Stream,
    t: usize,
) -> Result<SymmetricMatrix> {
    p.check_same_order(c)?;
    check_epsilon(epsilon)?;
    let n = p.n();
    let mut a = SymmetricMatrix::zeros(n)?;
    for i in 0..n {
        for j in (i + 1)..n {
            let mut rng = stream.edge_rng(t, i, j);
            let contaminated = rng.random::<f64>() < epsilon;
            let theta = if contaminated { c.get(i, j) } else { p.get(i, j) };
            a.set(i, j, family.sample(theta, &mut rng));
        }
    }
    Ok(a)
}

/// `m` i.i.d. graphs for fixed parameter matrices.
pub fn sample_graphs(
    p: &SymmetricMatrix,
    c: &SymmetricMatrix,
    epsilon: f64,
    family: WeightFamily,
    m: usize,
    stream: Stream,
) -> Result<Vec<SymmetricMatrix>> {
    if m == 0 {
        return Err(Error::input("need at least one graph"));
    }
    (0..m)
        .into_par_iter()
        .map(|t| sample_graph(p, c, epsilon, family, stream, t))
        .collect()
}

/// A sampled population: block labels, both parameter matrices and the graphs.
#[derive(Debug, Clone)]
pub struct Population {
    pub tau: BlockAssignment,
    pub p: SymmetricMatrix,
    pub c: SymmetricMatrix,
    pub graphs: Vec<SymmetricMatrix>,
}

impl Population {
    /// Hash of the raw bits of every graph, for checking that two consumers
    /// saw the same draw.
    pub fn digest(&self) -> u64 {
        graphs_digest(&self.graphs)
    }
}

pub fn graphs_digest(graphs: &[SymmetricMatrix]) -> u64 {
    let mut h = crate::rng::derive_seed(&[graphs.len() as u64]);
    for g in graphs {
        for &v in g.as_slice() {
            h = crate::rng::mix64(h ^ v.to_bits());
        }
    }
    h
}

pub fn sample_population(
    spec: &WsbmSpec,
    cont: &ContaminationSpec,
    n: usize,
    m: usize,
    stream: Stream,
) -> Result<Population> {
    if cont.b_prime.len() != spec.blocks() {
        return Err(Error::input("B and B' must have the same number of blocks"));
    }
    let tau = sample_tau(spec, n, stream.child(TAU_TAG))?;
    let p = build_p(spec, &tau)?;
    let c = build_c(cont, &tau)?;
    let graphs = sample_graphs(&p, &c, cont.epsilon, spec.family, m, stream.child(GRAPH_TAG))?;
    Ok(Population { tau, p, c, graphs })
}

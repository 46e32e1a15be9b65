//! Entry-wise estimators of the edge-parameter matrix.
//!
//! For both supported families the MLE of the mean is the sample mean. The
//! maximum Lq-likelihood estimator (MLqE) maximizes
//! `sum_i L_q(f_theta(x_i))` with `L_q(u) = (u^(1-q) - 1) / (1 - q)`, which
//! is the weighted likelihood equation
//!
//! ```text
//! sum_i f_theta(x_i)^(1-q) * d/dtheta log f_theta(x_i) = 0
//! ```
//!
//! Observations that fit the current `theta` poorly get small weights. For
//! the exponential family the equation becomes
//! `g(theta) = sum_i exp(-(1-q) x_i / theta) (x_i - theta) = 0`, all of whose
//! roots lie in `(min x, mean x)`; the estimator is the root closest to the
//! sample mean.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;
use crate::model::{check_epsilon, RBound, WeightFamily};

/// Geometric step of the descending root scan.
pub const SCAN_RATIO: f64 = 0.99;

/// Bisection stops once the bracket is shorter than `ROOT_TOL * mean`, so the
/// estimate scales exactly with the data.
pub const ROOT_TOL: f64 = 1e-10;

/// Exponents below this are treated as a zero weight.
const EXP_FLOOR: f64 = -700.0;

/// The `m` observed weights of one edge.
#[derive(Debug, Clone, Copy)]
pub struct EdgeSample<'a> {
    values: &'a [f64],
}

impl<'a> EdgeSample<'a> {
    pub fn new(values: &'a [f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::input("edge sample is empty"));
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::input(format!(
                "edge weights must be finite and nonnegative, found {bad}"
            )));
        }
        Ok(EdgeSample { values })
    }

    pub fn values(&self) -> &[f64] {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample mean, accumulated relative to the minimum so that a constant
    /// sample returns its value exactly and the mean never drops below the
    /// minimum through rounding.
    pub fn mean(&self) -> f64 {
        let lo = self.min();
        lo + self.values.iter().map(|&v| v - lo).sum::<f64>() / self.values.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }
}

/// Lq-likelihood exponent `q`, in `(0, 1]`; `q = 1` is the MLE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QParam(f64);

impl QParam {
    pub const MLE: QParam = QParam(1.0);

    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::input(format!("q = {q} must lie in (0, 1]")));
        }
        Ok(QParam(q))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_mle(self) -> bool {
        self.0 == 1.0
    }
}

/// Sample mean, the MLE of the mean for both families.
pub fn mle_entry(x: EdgeSample<'_>, _family: WeightFamily) -> f64 {
    x.mean()
}

pub fn mlqe_entry(x: EdgeSample<'_>, q: QParam, family: WeightFamily) -> Result<f64> {
    match family {
        WeightFamily::Exponential => mlqe_exponential(x, q),
        WeightFamily::Poisson => mlqe_poisson(x, q),
    }
}

#[inline]
fn clamped_exp(e: f64) -> f64 {
    if e < EXP_FLOOR {
        0.0
    } else {
        e.exp()
    }
}

/// `g(theta)` scaled by the positive factor `exp((1-q) min / theta)`, which
/// keeps the largest weight at 1 and leaves the sign unchanged.
fn exponential_score(values: &[f64], x_min: f64, one_minus_q: f64, theta: f64) -> f64 {
    let k = one_minus_q / theta;
    values
        .iter()
        .map(|&x| clamped_exp(-k * (x - x_min)) * (x - theta))
        .sum()
}

fn bisect(
    mut f: impl FnMut(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    f_lo_positive: bool,
    tol: f64,
) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v > 0.0) == f_lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// MLqE of an exponential mean.
///
/// Scans `theta` downward from the sample mean on a geometric grid until the
/// score changes sign, then bisects that bracket. Returns the mean when
/// `q = 1` or the sample is constant. A sample containing zeros may have no
/// root; the Lq-likelihood then increases without bound as `theta -> 0` and
/// the estimate is `0`.
pub fn mlqe_exponential(x: EdgeSample<'_>, q: QParam) -> Result<f64> {
    let mean = x.mean();
    if q.is_mle() || x.is_constant() || mean == 0.0 {
        return Ok(mean);
    }
    let values = x.values();
    let x_min = x.min();
    let omq = 1.0 - q.value();
    let g = |theta: f64| exponential_score(values, x_min, omq, theta);
    let floor = if x_min > 0.0 { x_min } else { mean * 1e-12 };

    let mut hi = mean;
    loop {
        let lo = (hi * SCAN_RATIO).max(floor);
        let v = g(lo);
        if v == 0.0 {
            return Ok(lo);
        }
        if v > 0.0 {
            return Ok(bisect(g, lo, hi, true, ROOT_TOL * mean));
        }
        if lo <= floor {
            if x_min == 0.0 {
                return Ok(0.0);
            }
            return Err(Error::Bracket {
                what: "exponential MLq",
                lo: floor,
                hi: mean,
            });
        }
        hi = lo;
    }
}

/// `ln x!` for a nonnegative integer-valued `x`.
fn ln_factorial(x: f64) -> f64 {
    libm::lgamma(x + 1.0)
}

/// Poisson score `sum_i w_i (x_i - theta)`, a positive multiple of the
/// weighted likelihood equation. Weights are computed in log space relative
/// to the largest one.
fn poisson_score(values: &[f64], log_fact: &[f64], one_minus_q: f64, theta: f64, buf: &mut Vec<f64>) -> f64 {
    let ln_theta = theta.ln();
    buf.clear();
    buf.extend(
        values
            .iter()
            .zip(log_fact)
            .map(|(&x, &lf)| one_minus_q * (x * ln_theta - theta - lf)),
    );
    let top = buf.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values
        .iter()
        .zip(buf.iter())
        .map(|(&x, &lw)| clamped_exp(lw - top) * (x - theta))
        .sum()
}

/// MLqE of a Poisson mean, searched inside `(0, e * mean]`.
///
/// The bracket nearest the sample mean is found by walking a geometric grid
/// outward in both directions, always advancing the side whose next point is
/// closer to the mean. All-zero samples and `q = 1` return the mean.
pub fn mlqe_poisson(x: EdgeSample<'_>, q: QParam) -> Result<f64> {
    if let Some(bad) = x.values().iter().find(|v| v.fract() != 0.0) {
        return Err(Error::input(format!("Poisson weights must be integers, found {bad}")));
    }
    let mean = x.mean();
    if q.is_mle() || x.is_constant() || mean == 0.0 {
        return Ok(mean);
    }
    let values = x.values();
    let log_fact: Vec<f64> = values.iter().map(|&v| ln_factorial(v)).collect();
    let omq = 1.0 - q.value();
    let mut buf = Vec::with_capacity(values.len());
    let mut g = |theta: f64| poisson_score(values, &log_fact, omq, theta, &mut buf);

    let x_min = x.min();
    let floor = if x_min > 0.0 { x_min } else { mean * 1e-12 };
    let ceiling = std::f64::consts::E * mean;
    let tol = ROOT_TOL * mean;

    let g_mean = g(mean);
    if g_mean == 0.0 {
        return Ok(mean);
    }
    let (mut down, mut g_down) = (mean, g_mean);
    let (mut up, mut g_up) = (mean, g_mean);
    let mut down_open = true;
    let mut up_open = true;
    while down_open || up_open {
        let next_down = (down * SCAN_RATIO).max(floor);
        let next_up = (up / SCAN_RATIO).min(ceiling);
        let take_down =
            down_open && (!up_open || mean - next_down <= next_up - mean);
        if take_down {
            let v = g(next_down);
            if v == 0.0 {
                return Ok(next_down);
            }
            if (v > 0.0) != (g_down > 0.0) {
                let lo_pos = v > 0.0;
                return Ok(bisect(&mut g, next_down, down, lo_pos, tol));
            }
            down = next_down;
            g_down = v;
            down_open = next_down > floor;
        } else {
            let v = g(next_up);
            if v == 0.0 {
                return Ok(next_up);
            }
            if (v > 0.0) != (g_up > 0.0) {
                let lo_pos = g_up > 0.0;
                return Ok(bisect(&mut g, up, next_up, lo_pos, tol));
            }
            up = next_up;
            g_up = v;
            up_open = next_up < ceiling;
        }
    }
    if x_min == 0.0 && g_mean < 0.0 && g_down < 0.0 {
        // score negative on the whole range: Lq-likelihood is maximized as theta -> 0
        return Ok(0.0);
    }
    Err(Error::Bracket {
        what: "Poisson MLq",
        lo: floor,
        hi: ceiling,
    })
}

/// Entry-wise estimate from a population of hollow graphs.
///
/// `q = 1` gives the MLE. The diagonal of the result is zero.
pub fn estimate_matrix(
    graphs: &[SymmetricMatrix],
    q: QParam,
    family: WeightFamily,
) -> Result<SymmetricMatrix> {
    let first = graphs
        .first()
        .ok_or_else(|| Error::input("need at least one graph"))?;
    let n = first.n();
    for (t, g) in graphs.iter().enumerate() {
        if g.n() != n {
            return Err(Error::input(format!(
                "graph {t} has {} vertices, expected {n}",
                g.n()
            )));
        }
        if !g.is_hollow() {
            return Err(Error::input(format!("graph {t} has a nonzero diagonal")));
        }
    }
    let m = graphs.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut buf = vec![0.0; m];
            ((i + 1)..n)
                .map(|j| {
                    for (b, g) in buf.iter_mut().zip(graphs) {
                        *b = g.get(i, j);
                    }
                    let x = EdgeSample::new(&buf).map_err(|e| edge_error(i, j, e))?;
                    if q.is_mle() {
                        Ok(mle_entry(x, family))
                    } else {
                        mlqe_entry(x, q, family).map_err(|e| edge_error(i, j, e))
                    }
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let mut out = SymmetricMatrix::zeros(n)?;
    for (i, row) in rows.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            out.set(i, i + 1 + k, v);
        }
    }
    Ok(out)
}

fn edge_error(i: usize, j: usize, e: Error) -> Error {
    Error::Edge {
        i,
        j,
        source: Box::new(e),
    }
}

/// Population MLq solution `theta(F)` for the exponential mixture
/// `(1 - epsilon) Exp(p) + epsilon Exp(c)`.
///
/// It is the real root of
/// `h(theta) = (c(1-q) + theta)^2 (1-epsilon)(pq - theta)
///            - (p(1-q) + theta)^2 epsilon (theta - cq)`
/// in `[q p, (1 - epsilon) p + epsilon c)`. With `p = c` the root is `q p`.
pub fn population_mlq_root(p: f64, c: f64, epsilon: f64, q: QParam) -> Result<f64> {
    if !(p > 0.0 && p.is_finite() && c >= p && c.is_finite()) {
        return Err(Error::input(format!("need 0 < p <= c, got p = {p}, c = {c}")));
    }
    check_epsilon(epsilon)?;
    if epsilon == 0.0 {
        return Err(Error::input("epsilon must be positive"));
    }
    let q = q.value();
    if q >= 1.0 {
        return Err(Error::input("population MLq root needs q < 1"));
    }
    let h = |t: f64| population_mlq_cubic(p, c, epsilon, q, t);
    let lo = q * p;
    let hi = (1.0 - epsilon) * p + epsilon * c;
    if h(lo) == 0.0 {
        return Ok(lo);
    }
    if !(h(lo) > 0.0 && h(hi) < 0.0) {
        return Err(Error::Bracket {
            what: "population MLq",
            lo,
            hi,
        });
    }
    Ok(bisect(h, lo, hi, true, 0.0))
}

/// The cubic whose real root is the population MLq solution.
pub fn population_mlq_cubic(p: f64, c: f64, epsilon: f64, q: f64, theta: f64) -> f64 {
    let a = c * (1.0 - q) + theta;
    let b = p * (1.0 - q) + theta;
    a * a * (1.0 - epsilon) * (p * q - theta) - b * b * epsilon * (theta - c * q)
}

/// Entry-wise projection of `raw` onto `[0, min(cap, R)]`.
pub fn truncate_estimate(
    raw: &SymmetricMatrix,
    cap: &SymmetricMatrix,
    r: RBound,
) -> Result<SymmetricMatrix> {
    raw.check_same_order(cap)?;
    SymmetricMatrix::from_upper_fn(raw.n(), |i, j| {
        let upper = cap.get(i, j).min(r.value());
        raw.get(i, j).min(upper).max(0.0)
    })
}

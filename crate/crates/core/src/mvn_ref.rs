//! Reference estimators of `P(X < S)` for `X ~ N(0, C C^T)`: Genz's
//! transformed-integral Monte Carlo and the GHK simulator.
//!
//! Both use the lower-triangular convention `X = C Y`, so coordinate `i`
//! depends on `c_ij` for `j < i`.

use std::time::Instant;

use rayon::prelude::*;

use crate::covariance::CholeskyFactor;
use crate::error::{Error, Result};
use crate::fpt::Z_99;
use crate::num::{cdf_f64, quantile_f64, RandomStream, RunningStats};
use crate::scalar::Scalar;

/// Integrand evaluations per Genz batch.
pub const GENZ_BATCH: usize = 256;
/// Batches required before the Genz error estimate may stop a run.
pub const GENZ_MIN_BATCHES: usize = 10;
const GENZ_ROUND: usize = 32;
const GHK_CHUNK: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct GenzResult {
    pub estimate: f64,
    pub error_99: f64,
    pub n_evals: u64,
    /// The evaluation cap was reached with `error_99` still above tolerance.
    pub hit_eval_cap: bool,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhkResult {
    pub estimate: f64,
    pub stderr: f64,
    pub n_draws: u64,
    pub elapsed_seconds: f64,
}

/// Default Genz evaluation cap, `1000 k`.
pub fn default_max_evals(k: usize) -> u64 {
    1000 * k as u64
}

fn check_dims<T: Scalar>(thresholds: &[T], chol: &CholeskyFactor<T>) -> Result<usize> {
    let k = thresholds.len();
    if k == 0 {
        return Err(Error::Parameter("need at least one threshold".into()));
    }
    if chol.dim() != k {
        return Err(Error::Shape(format!(
            "{k} thresholds but a {0}x{0} factor",
            chol.dim()
        )));
    }
    Ok(k)
}

struct Factor {
    s: Vec<f64>,
    // row-major lower triangle, row i holding c_i0..c_ii
    c: Vec<f64>,
}

impl Factor {
    fn new<T: Scalar>(thresholds: &[T], chol: &CholeskyFactor<T>) -> Self {
        let k = thresholds.len();
        let mut c = Vec::with_capacity(k * (k + 1) / 2);
        for i in 0..k {
            c.extend(chol.lower_row(i)[..=i].iter().map(|v| v.as_f64()));
        }
        Self {
            s: thresholds.iter().map(|v| v.as_f64()).collect(),
            c,
        }
    }

    fn row(&self, i: usize) -> &[f64] {
        let start = i * (i + 1) / 2;
        &self.c[start..=start + i]
    }

    /// `(S_i - sum_{j<i} c_ij y_j) / c_ii`
    #[inline]
    fn limit(&self, i: usize, y: &[f64]) -> f64 {
        let row = self.row(i);
        let shift: f64 = row[..i].iter().zip(y).map(|(c, y)| c * y).sum();
        (self.s[i] - shift) / row[i]
    }

    /// One sequential pass: `prod Φ(u_i)` with `y_i = Φ^{-1}(w_i Φ(u_i))`,
    /// where `w_i` comes from `next_w`. The last coordinate draws nothing.
    #[inline]
    fn weight(&self, y: &mut [f64], mut next_w: impl FnMut() -> f64) -> f64 {
        let k = self.s.len();
        let mut weight = 1.0;
        for i in 0..k {
            let e = cdf_f64(self.limit(i, y));
            weight *= e;
            if weight == 0.0 {
                return 0.0;
            }
            if i + 1 < k {
                let p = (next_w() * e).max(f64::MIN_POSITIVE);
                y[i] = quantile_f64(p);
            }
        }
        weight
    }
}

/// Monte Carlo estimate of the transformed integral, run in batches of
/// [`GENZ_BATCH`] evaluations until the 99% error is at most `tolerance` or
/// `max_evals` evaluations are spent. Batch `b` draws from substream `b`.
pub fn genz_estimate<T: Scalar>(
    thresholds: &[T],
    chol: &CholeskyFactor<T>,
    tolerance: f64,
    max_evals: u64,
    stream: &RandomStream,
) -> Result<GenzResult> {
    let start = Instant::now();
    let k = check_dims(thresholds, chol)?;
    if !(tolerance > 0.0) {
        return Err(Error::Parameter(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    if max_evals == 0 {
        return Err(Error::Parameter("max_evals must be at least 1".into()));
    }
    let f = Factor::new(thresholds, chol);
    if k == 1 {
        return Ok(GenzResult {
            estimate: cdf_f64(f.limit(0, &[])),
            error_99: 0.0,
            n_evals: 1,
            hit_eval_cap: false,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        });
    }

    let n_batches = max_evals.div_ceil(GENZ_BATCH as u64);
    let run_batch = |b: u64| -> RunningStats {
        let mut rng = stream.substream(b);
        let mut y = vec![0.0; k];
        let n = (max_evals - b * GENZ_BATCH as u64).min(GENZ_BATCH as u64);
        (0..n)
            .map(|_| f.weight(&mut y, || rng.next_uniform()))
            .collect()
    };

    let mut all = RunningStats::new();
    let mut means = RunningStats::new();
    let mut error_99 = f64::INFINITY;
    let mut next = 0u64;
    'rounds: while next < n_batches {
        let end = (next + GENZ_ROUND as u64).min(n_batches);
        let round: Vec<RunningStats> = (next..end).into_par_iter().map(run_batch).collect();
        next = end;
        for batch in &round {
            all.merge(batch);
            means.push(batch.mean());
            error_99 = if means.count() >= 2 {
                Z_99 * means.std_dev() / (means.count() as f64).sqrt()
            } else {
                Z_99 * all.std_error()
            };
            if means.count() as usize >= GENZ_MIN_BATCHES && error_99 <= tolerance {
                break 'rounds;
            }
        }
    }
    let n_evals = all.count();
    Ok(GenzResult {
        estimate: all.mean().clamp(0.0, 1.0),
        error_99,
        n_evals,
        hit_eval_cap: n_evals >= max_evals && error_99 > tolerance,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// GHK simulator with `n_draws` replications; replication `r` draws from
/// substream `r`. Replications whose weight underflows count as zeros.
pub fn ghk_estimate<T: Scalar>(
    thresholds: &[T],
    chol: &CholeskyFactor<T>,
    n_draws: u64,
    stream: &RandomStream,
) -> Result<GhkResult> {
    let start = Instant::now();
    let k = check_dims(thresholds, chol)?;
    if n_draws == 0 {
        return Err(Error::Parameter("n_draws must be at least 1".into()));
    }
    let f = Factor::new(thresholds, chol);
    let n_chunks = n_draws.div_ceil(GHK_CHUNK as u64);
    // fixed chunks merged in order keep the result independent of the pool size
    let chunks: Vec<RunningStats> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut y = vec![0.0; k];
            let lo = c * GHK_CHUNK as u64;
            let hi = (lo + GHK_CHUNK as u64).min(n_draws);
            (lo..hi)
                .map(|r| {
                    let mut rng = stream.substream(r);
                    f.weight(&mut y, || rng.next_uniform())
                })
                .collect()
        })
        .collect();
    let mut stats = RunningStats::new();
    chunks.iter().for_each(|c| stats.merge(c));
    Ok(GhkResult {
        estimate: stats.mean().clamp(0.0, 1.0),
        stderr: if n_draws > 1 { stats.std_error() } else { 0.0 },
        n_draws,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

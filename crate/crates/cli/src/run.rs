use std::time::Instant;

use orthant::bounds::{slepian_bounds, BoundCase};
use orthant::fpt::{estimate_orthant_fpt, fairness_bound_check, Z_99};
use orthant::mvn_ref::{default_max_evals, genz_estimate, ghk_estimate};
use orthant::path_sim::sample_paths;
use orthant::{
    GenzResult, GhkResult, OrthantProblem, PathBatch, RandomStream, SamplerKind, SamplingMethod,
    SurvivalCurve,
};

use crate::config::{RunConfig, Task};
use crate::report::ResultRow;
use crate::CliError;

const LANE_FPT: u64 = 0;
const LANE_GENZ: u64 = 1;
const LANE_GHK: u64 = 2;

/// Root stream for one method and horizon. Lanes and horizons occupy the
/// high bits so per-path and per-batch substream offsets never collide.
pub fn root_stream(seed: u64, lane: u64, k: usize) -> RandomStream {
    RandomStream::new(seed, (lane << 56) | ((k as u64) << 32))
}

#[derive(Debug)]
pub enum Output {
    Rows(Vec<ResultRow>),
    Paths(PathBatch),
}

pub fn run(config: &RunConfig) -> Result<Output, CliError> {
    let rows = match &config.task {
        Task::Fpt {
            n_paths,
            method,
            per_k: false,
        } => {
            let curve = fpt_curve(config, *config.ks.end(), *n_paths, *method, 0)?;
            config
                .ks
                .clone()
                .map(|k| fpt_row(&curve, k, *method))
                .collect()
        }
        Task::Fpt {
            n_paths,
            method,
            per_k: true,
        } => config
            .ks
            .clone()
            .map(|k| {
                Ok(fpt_row(
                    &fpt_curve(config, k, *n_paths, *method, k)?,
                    k,
                    *method,
                ))
            })
            .collect::<Result<_, CliError>>()?,
        Task::Genz {
            tolerance,
            max_evals,
        } => config
            .ks
            .clone()
            .map(|k| Ok(genz_row(&genz(config, k, *tolerance, *max_evals)?, k)))
            .collect::<Result<_, CliError>>()?,
        Task::Ghk { n_draws } => config
            .ks
            .clone()
            .map(|k| Ok(ghk_row(&ghk(config, k, *n_draws)?, k)))
            .collect::<Result<_, CliError>>()?,
        Task::Bounds { quad_nodes } => bound_rows(config, *quad_nodes)?,
        Task::Compare {
            n_paths,
            n_draws,
            tolerance,
            max_evals,
            method,
            quad_nodes,
        } => compare(
            config,
            *n_paths,
            *n_draws,
            *tolerance,
            *max_evals,
            *method,
            *quad_nodes,
        )?,
        Task::Table {
            table,
            method,
            tolerance,
        } => {
            let mut rows = Vec::new();
            for k in config.ks.clone() {
                let n = table.n_paths_at(k).expect("horizon taken from the table");
                let reference = format!("reference={}", table.genz(k).expect("same horizon"));
                let curve = fpt_curve(config, k, n as usize, *method, k)?;
                let mut fpt = fpt_row(&curve, k, *method);
                let mut genz = genz_row(&genz(config, k, *tolerance, None)?, k);
                let mut ghk = ghk_row(&ghk(config, k, n)?, k);
                for row in [&mut fpt, &mut genz, &mut ghk] {
                    row.flags.push(reference.clone());
                }
                rows.extend([genz, ghk, fpt]);
            }
            rows
        }
        Task::Paths { n_paths, method } => {
            let k = *config.ks.end();
            let batch = sample_paths(
                &config.cov,
                k,
                *n_paths,
                &root_stream(config.seed, LANE_FPT, 0),
                *method,
            )?;
            return Ok(Output::Paths(batch));
        }
    };
    Ok(Output::Rows(rows))
}

fn fpt_curve(
    config: &RunConfig,
    k_max: usize,
    n_paths: usize,
    method: SamplingMethod,
    stream_k: usize,
) -> Result<SurvivalCurve, CliError> {
    let problem = OrthantProblem::new(config.cov.clone(), config.boundary.clone(), k_max)?;
    Ok(estimate_orthant_fpt(
        &problem,
        n_paths,
        &root_stream(config.seed, LANE_FPT, stream_k),
        method,
    )?)
}

fn fpt_row(curve: &SurvivalCurve, k: usize, requested: SamplingMethod) -> ResultRow {
    let (ci_low, ci_high) = curve.wilson_interval(k);
    let mut flags = Vec::new();
    if requested == SamplingMethod::Auto
        && curve.k_max() >= 2
        && curve.method() == Some(SamplerKind::DurbinLevinson)
    {
        flags.push("fallback_used".to_string());
    }
    if !curve.start_condition_ok() {
        flags.push("start_condition_violated".to_string());
    }
    ResultRow {
        method: "fpt".into(),
        k,
        estimate: curve.p_hat(k),
        stderr: curve.stderr(k),
        ci_low,
        ci_high,
        n_samples: curve.n_paths(),
        seconds: curve.elapsed_seconds(),
        flags,
    }
}

fn genz(
    config: &RunConfig,
    k: usize,
    tolerance: f64,
    max_evals: Option<u64>,
) -> Result<GenzResult, CliError> {
    let problem = OrthantProblem::new(config.cov.clone(), config.boundary.clone(), k)?;
    let chol = problem.cholesky(k)?;
    let cap = max_evals.unwrap_or_else(|| default_max_evals(k));
    Ok(genz_estimate(
        &problem.thresholds(),
        &chol,
        tolerance,
        cap,
        &root_stream(config.seed, LANE_GENZ, k),
    )?)
}

fn genz_row(r: &GenzResult, k: usize) -> ResultRow {
    ResultRow {
        method: "genz".into(),
        k,
        estimate: r.estimate,
        stderr: r.error_99,
        ci_low: (r.estimate - r.error_99).max(0.0),
        ci_high: (r.estimate + r.error_99).min(1.0),
        n_samples: r.n_evals,
        seconds: r.elapsed_seconds,
        flags: if r.hit_eval_cap {
            vec!["eval_cap_hit".into()]
        } else {
            vec![]
        },
    }
}

fn ghk(config: &RunConfig, k: usize, n_draws: u64) -> Result<GhkResult, CliError> {
    let problem = OrthantProblem::new(config.cov.clone(), config.boundary.clone(), k)?;
    let chol = problem.cholesky(k)?;
    Ok(ghk_estimate(
        &problem.thresholds(),
        &chol,
        n_draws,
        &root_stream(config.seed, LANE_GHK, k),
    )?)
}

fn ghk_row(r: &GhkResult, k: usize) -> ResultRow {
    ResultRow {
        method: "ghk".into(),
        k,
        estimate: r.estimate,
        stderr: r.stderr,
        ci_low: (r.estimate - Z_99 * r.stderr).max(0.0),
        ci_high: (r.estimate + Z_99 * r.stderr).min(1.0),
        n_samples: r.n_draws,
        seconds: r.elapsed_seconds,
        flags: vec![],
    }
}

fn bound_rows(config: &RunConfig, quad_nodes: usize) -> Result<Vec<ResultRow>, CliError> {
    let start = Instant::now();
    let bounds = slepian_bounds(&config.cov, &config.boundary, *config.ks.end(), quad_nodes)?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(config
        .ks
        .clone()
        .map(|k| {
            let b = &bounds[k - 1];
            let mut flags = vec![match b.case {
                BoundCase::Exchangeable => "exchangeable".to_string(),
                BoundCase::Independent => "independent".to_string(),
            }];
            if b.unstable {
                flags.push("unstable".into());
            }
            ResultRow {
                method: "bound".into(),
                k,
                estimate: b.value,
                stderr: 0.0,
                ci_low: b.value,
                ci_high: b.value,
                n_samples: quad_nodes as u64,
                seconds,
                flags,
            }
        })
        .collect())
}

/// One standard deviation of a row's estimate.
fn sigma(row: &ResultRow) -> f64 {
    if row.method == "genz" {
        row.stderr / Z_99
    } else {
        row.stderr
    }
}

fn compare(
    config: &RunConfig,
    n_paths: usize,
    n_draws: u64,
    tolerance: f64,
    max_evals: Option<u64>,
    method: SamplingMethod,
    quad_nodes: usize,
) -> Result<Vec<ResultRow>, CliError> {
    let curve = fpt_curve(config, *config.ks.end(), n_paths, method, 0)?;
    let bounds = bound_rows(config, quad_nodes)?;
    let bound_values: Vec<f64> = {
        let mut v = vec![1.0; *config.ks.end()];
        for b in &bounds {
            v[b.k - 1] = b.estimate;
        }
        v
    };
    let fairness = fairness_bound_check(&curve, &bound_values);
    let mut rows = Vec::new();
    for (k, bound) in config.ks.clone().zip(bounds) {
        let mut estimates = [
            fpt_row(&curve, k, method),
            genz_row(&genz(config, k, tolerance, max_evals)?, k),
            ghk_row(&ghk(config, k, n_draws)?, k),
        ];
        if fairness.violations.iter().any(|v| v.k == k) {
            estimates[0].flags.push("bound_exceeded".into());
        }
        for i in 0..3 {
            let disagrees = (0..3).filter(|&j| j != i).any(|j| {
                let (a, b) = (&estimates[i], &estimates[j]);
                (a.estimate - b.estimate).abs() > 3.0 * sigma(a).hypot(sigma(b))
            });
            if disagrees {
                estimates[i].flags.push("disagrees".into());
            }
        }
        rows.extend(estimates);
        rows.push(bound);
    }
    Ok(rows)
}

//! Validated run configuration. Everything is checked here, before any
//! numerical work starts.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use orthant::bounds::MIN_QUAD_NODES;
use orthant::{Boundary, CovarianceSequence, SamplingMethod};

use crate::args::{Cli, Command, ModelArgs, ModelKind, ProblemArgs};
use crate::tables::{self, ReferenceTable};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Arfima { d: f64 },
    CovFile { path: PathBuf },
}

#[derive(Debug, Clone)]
pub enum Task {
    Fpt {
        n_paths: usize,
        method: SamplingMethod,
        per_k: bool,
    },
    Genz {
        tolerance: f64,
        max_evals: Option<u64>,
    },
    Ghk {
        n_draws: u64,
    },
    Bounds {
        quad_nodes: usize,
    },
    Compare {
        n_paths: usize,
        n_draws: u64,
        tolerance: f64,
        max_evals: Option<u64>,
        method: SamplingMethod,
        quad_nodes: usize,
    },
    Table {
        table: &'static ReferenceTable,
        method: SamplingMethod,
        tolerance: f64,
    },
    Paths {
        n_paths: usize,
        method: SamplingMethod,
    },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub task: Task,
    pub model: ModelSpec,
    pub cov: CovarianceSequence,
    pub boundary: Boundary,
    pub ks: RangeInclusive<usize>,
    pub seed: u64,
    pub workers: usize,
    pub output: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn parse_k_range(spec: &str) -> Result<RangeInclusive<usize>, CliError> {
    let (a, b) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("k-range {spec:?}: expected a:b")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("k-range {spec:?}: bad integer {s:?}")))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if a == 0 || a > b {
        return Err(usage(format!("k-range {spec:?}: need 1 <= a <= b")));
    }
    Ok(a..=b)
}

fn positive(name: &str, v: usize) -> Result<usize, CliError> {
    if v == 0 {
        Err(usage(format!("--{name} must be at least 1")))
    } else {
        Ok(v)
    }
}

fn tolerance(v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("--tolerance must be positive, got {v}")))
    }
}

fn quad_nodes(v: usize) -> Result<usize, CliError> {
    if v < MIN_QUAD_NODES {
        Err(usage(format!(
            "--quad-nodes must be at least {MIN_QUAD_NODES}"
        )))
    } else {
        Ok(v)
    }
}

fn method(s: &str) -> Result<SamplingMethod, CliError> {
    s.parse().map_err(|e: orthant::Error| usage(e.to_string()))
}

fn model(args: &ModelArgs, max_lag: usize) -> Result<(ModelSpec, CovarianceSequence), CliError> {
    match args.model {
        ModelKind::Arfima => {
            if args.d.is_nan() || args.d.abs() >= 0.5 {
                return Err(usage(format!("--d must satisfy |d| < 0.5, got {}", args.d)));
            }
            let cov =
                CovarianceSequence::arfima(args.d, max_lag).map_err(|e| usage(e.to_string()))?;
            Ok((ModelSpec::Arfima { d: args.d }, cov))
        }
        ModelKind::File => {
            let path = args
                .cov_file
                .clone()
                .ok_or_else(|| usage("--model file needs --cov-file"))?;
            let cov = CovarianceSequence::from_file(&path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            if cov.max_lag() < max_lag {
                return Err(usage(format!(
                    "{}: lags up to {max_lag} needed, file stops at {}",
                    path.display(),
                    cov.max_lag()
                )));
            }
            Ok((ModelSpec::CovFile { path }, cov))
        }
    }
}

fn horizon(problem: &ProblemArgs) -> Result<RangeInclusive<usize>, CliError> {
    match (&problem.k, &problem.k_range) {
        (Some(k), None) => Ok(positive("k", *k)?..=*k),
        (None, Some(r)) => parse_k_range(r),
        (None, None) => Err(usage("one of --k or --k-range is required")),
        (Some(_), Some(_)) => Err(usage("--k and --k-range are mutually exclusive")),
    }
}

fn boundary(spec: &str, k_max: usize) -> Result<Boundary, CliError> {
    let b = Boundary::parse(spec).map_err(|e| usage(e.to_string()))?;
    b.thresholds(k_max).map_err(|e| usage(e.to_string()))?;
    Ok(b)
}

fn workers(w: Option<usize>) -> Result<usize, CliError> {
    match w {
        Some(w) => positive("workers", w),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let workers = workers(cli.workers)?;
        let build = |problem: &ProblemArgs, task: Task| -> Result<RunConfig, CliError> {
            let ks = horizon(problem)?;
            let (model, cov) = model(&problem.model, ks.end() - 1)?;
            Ok(RunConfig {
                task,
                model,
                cov,
                boundary: boundary(&problem.boundary, *ks.end())?,
                ks,
                seed: cli.seed,
                workers,
                output: cli.output.clone(),
            })
        };
        match &cli.command {
            Command::Fpt {
                problem,
                paths,
                method: m,
                per_k,
            } => build(
                problem,
                Task::Fpt {
                    n_paths: positive("paths", *paths)?,
                    method: method(m)?,
                    per_k: *per_k,
                },
            ),
            Command::Genz {
                problem,
                tolerance: t,
                max_evals,
            } => {
                if *max_evals == Some(0) {
                    return Err(usage("--max-evals must be at least 1"));
                }
                build(
                    problem,
                    Task::Genz {
                        tolerance: tolerance(*t)?,
                        max_evals: *max_evals,
                    },
                )
            }
            Command::Ghk { problem, draws } => build(
                problem,
                Task::Ghk {
                    n_draws: positive("draws", *draws as usize)? as u64,
                },
            ),
            Command::Bounds {
                problem,
                quad_nodes: q,
            } => build(
                problem,
                Task::Bounds {
                    quad_nodes: quad_nodes(*q)?,
                },
            ),
            Command::Compare {
                problem,
                paths,
                draws,
                tolerance: t,
                max_evals,
                method: m,
                quad_nodes: q,
            } => {
                let n_paths = positive("paths", *paths)?;
                let n_draws = draws.unwrap_or(n_paths as u64);
                if n_draws == 0 {
                    return Err(usage("--draws must be at least 1"));
                }
                if *max_evals == Some(0) {
                    return Err(usage("--max-evals must be at least 1"));
                }
                build(
                    problem,
                    Task::Compare {
                        n_paths,
                        n_draws,
                        tolerance: tolerance(*t)?,
                        max_evals: *max_evals,
                        method: method(m)?,
                        quad_nodes: quad_nodes(*q)?,
                    },
                )
            }
            Command::Table {
                which,
                method: m,
                tolerance: t,
            } => {
                let table = tables::table(*which).ok_or_else(|| usage("--which must be 1 or 2"))?;
                let ks = table.ks();
                let cov = CovarianceSequence::arfima(table.d, ks.end() - 1)
                    .map_err(|e| usage(e.to_string()))?;
                Ok(RunConfig {
                    task: Task::Table {
                        table,
                        method: method(m)?,
                        tolerance: tolerance(*t)?,
                    },
                    model: ModelSpec::Arfima { d: table.d },
                    cov,
                    boundary: boundary(table.boundary, *ks.end())?,
                    ks,
                    seed: cli.seed,
                    workers,
                    output: cli.output.clone(),
                })
            }
            Command::Paths {
                model: margs,
                k,
                paths,
                method: m,
            } => {
                let k = positive("k", *k)?;
                let (model, cov) = model(margs, k - 1)?;
                Ok(RunConfig {
                    task: Task::Paths {
                        n_paths: positive("paths", *paths)?,
                        method: method(m)?,
                    },
                    model,
                    cov,
                    boundary: Boundary::Constant(f64::INFINITY),
                    ks: k..=k,
                    seed: cli.seed,
                    workers,
                    output: cli.output.clone(),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn config(args: &[&str]) -> Result<RunConfig, CliError> {
        RunConfig::from_cli(
            &Cli::try_parse_from(std::iter::once("orthant").chain(args.iter().copied())).unwrap(),
        )
    }

    #[test]
    fn k_range_parsing() {
        assert_eq!(parse_k_range("20:40").unwrap(), 20..=40);
        assert_eq!(parse_k_range("3:3").unwrap(), 3..=3);
        for bad in ["0:4", "5:4", "5", "a:b"] {
            assert!(parse_k_range(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn validates_before_running() {
        assert!(config(&["fpt", "--k", "10"]).is_ok());
        for bad in [
            &["fpt", "--d", "0.5", "--k", "10"][..],
            &["fpt", "--k", "0"],
            &["fpt"],
            &["fpt", "--k", "5", "--paths", "0"],
            &["fpt", "--k", "5", "--workers", "0"],
            &["fpt", "--k", "5", "--boundary", "exp:1"],
            &["fpt", "--k", "5", "--method", "fourier"],
            &["genz", "--k", "5", "--tolerance", "0"],
            &["bounds", "--k", "5", "--quad-nodes", "8"],
            &["table", "--which", "3"],
            &["fpt", "--model", "file", "--k", "5"],
        ] {
            assert!(matches!(config(bad), Err(CliError::Usage(_))), "{bad:?}");
        }
    }

    #[test]
    fn table_settings() {
        let c = config(&["table", "--which", "2"]).unwrap();
        assert_eq!(c.model, ModelSpec::Arfima { d: 0.3 });
        assert_eq!(
            c.boundary,
            Boundary::Linear {
                intercept: 2.0,
                slope: -0.01
            }
        );
        assert_eq!(c.ks, 20..=40);
        let c = config(&["table", "--which", "1"]).unwrap();
        assert_eq!(c.boundary, Boundary::Constant(1.0));
    }
}

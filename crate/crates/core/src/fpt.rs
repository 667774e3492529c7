//! First-passage-time estimation of orthant probabilities.
//!
//! With `T = min{t >= 1 : X_t >= S_t}`, the orthant probability
//! `P(X_1 < S_1, ..., X_k < S_k)` equals `P(T > k)`, so one batch of paths of
//! length `k_max` yields the estimate for every `k <= k_max` at once.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::covariance::{cholesky, toeplitz_matrix, CholeskyFactor, CovarianceSequence};
use crate::error::{Error, Result};
use crate::num::RandomStream;
use crate::path_sim::{PathSampler, SamplerKind, SamplingMethod};
use crate::scalar::Scalar;

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_901;

/// Absorbing boundary `S_t`, evaluated at integer `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Boundary<T> {
    Constant(T),
    /// `S_t = intercept + slope * t`
    Linear {
        intercept: T,
        slope: T,
    },
    /// `S_1, S_2, ...`; `S_0` is +∞.
    Tabulated(Vec<T>),
}

impl<T: Scalar> Boundary<T> {
    /// Parses `const:<c>`, `lin:<a>,<b>` or `file:<path>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, arg) = spec.split_once(':').ok_or_else(|| {
            Error::Parameter(format!("boundary {spec:?}: expected <kind>:<args>"))
        })?;
        let num = |s: &str| -> Result<T> {
            s.trim()
                .parse::<f64>()
                .map(T::lit)
                .map_err(|_| Error::Parameter(format!("boundary {spec:?}: bad number {s:?}")))
        };
        match kind.trim() {
            "const" => Ok(Self::Constant(num(arg)?)),
            "lin" => {
                let (a, b) = arg.split_once(',').ok_or_else(|| {
                    Error::Parameter(format!("boundary {spec:?}: expected lin:<a>,<b>"))
                })?;
                Ok(Self::Linear {
                    intercept: num(a)?,
                    slope: num(b)?,
                })
            }
            "file" => Self::from_file(arg.trim()),
            other => Err(Error::Parameter(format!("unknown boundary kind {other:?}"))),
        }
    }

    /// One `S_t` per line starting at `t = 1`; `#` lines are comments.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| {
                Error::Format(format!(
                    "boundary line {}: not a number: {line:?}",
                    lineno + 1
                ))
            })?;
            if v.is_nan() {
                return Err(Error::Format(format!("boundary line {}: NaN", lineno + 1)));
            }
            values.push(T::lit(v));
        }
        if values.is_empty() {
            return Err(Error::Format("boundary table is empty".into()));
        }
        Ok(Self::Tabulated(values))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_table(&std::fs::read_to_string(path)?)
    }

    /// `S_t`. Tabulated boundaries are +∞ at `t = 0` and past the table.
    pub fn at(&self, t: usize) -> T {
        match self {
            Self::Constant(c) => *c,
            Self::Linear { intercept, slope } => *intercept + *slope * T::from_count(t),
            Self::Tabulated(v) => {
                if t == 0 {
                    T::infinity()
                } else {
                    v.get(t - 1).copied().unwrap_or_else(T::infinity)
                }
            }
        }
    }

    /// `S_1..=S_k`.
    pub fn thresholds(&self, k: usize) -> Result<Vec<T>> {
        if let Self::Tabulated(v) = self {
            if v.len() < k {
                return Err(Error::Shape(format!(
                    "horizon {k} exceeds the {} tabulated boundary values",
                    v.len()
                )));
            }
        }
        Ok((1..=k).map(|t| self.at(t)).collect())
    }

    /// `max_{1 <= t <= k} S_t`.
    pub fn sup_over(&self, k: usize) -> T {
        (1..=k).map(|t| self.at(t)).fold(T::neg_infinity(), T::max)
    }

    /// Whether the series, started at `X_0 = 0`, begins below the boundary.
    pub fn start_condition_holds(&self) -> bool {
        self.at(0) > T::zero()
    }
}

impl<T: Scalar> fmt::Display for Boundary<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "const:{c}"),
            Self::Linear { intercept, slope } => write!(f, "lin:{intercept},{slope}"),
            Self::Tabulated(v) => write!(f, "table[{}]", v.len()),
        }
    }
}

/// First index `t` (1-based) with `path[t-1] >= S_t`, or `None` if censored.
pub fn first_crossing<T: Scalar>(path: &[T], boundary: &Boundary<T>) -> Option<usize> {
    path.iter()
        .enumerate()
        .position(|(i, &x)| x >= boundary.at(i + 1))
        .map(|i| i + 1)
}

#[inline]
fn first_crossing_thresholds<T: Scalar>(path: &[T], thresholds: &[T]) -> Option<usize> {
    path.iter().zip(thresholds).position(|(&x, &s)| x >= s)
}

/// `P_k(S, Sigma)` for `k = 1..=k_max`, with Sigma the Toeplitz matrix of
/// `cov`.
#[derive(Debug, Clone)]
pub struct OrthantProblem<T> {
    cov: CovarianceSequence<T>,
    boundary: Boundary<T>,
    k_max: usize,
}

impl<T: Scalar> OrthantProblem<T> {
    pub fn new(cov: CovarianceSequence<T>, boundary: Boundary<T>, k_max: usize) -> Result<Self> {
        if k_max == 0 {
            return Err(Error::Parameter("k_max must be at least 1".into()));
        }
        boundary.thresholds(k_max)?;
        let cov = if cov.max_lag() + 1 < k_max {
            cov.with_max_lag(k_max - 1)?
        } else {
            cov
        };
        Ok(Self {
            cov,
            boundary,
            k_max,
        })
    }

    pub fn cov(&self) -> &CovarianceSequence<T> {
        &self.cov
    }

    pub fn boundary(&self) -> &Boundary<T> {
        &self.boundary
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn thresholds(&self) -> Vec<T> {
        self.boundary
            .thresholds(self.k_max)
            .expect("checked at construction")
    }

    /// Cholesky factor of the leading `k x k` Toeplitz block.
    pub fn cholesky(&self, k: usize) -> Result<CholeskyFactor<T>> {
        cholesky(&toeplitz_matrix(&self.cov, k)?)
    }
}

/// Crossing tallies and the survival estimates `p_hat[k] = 1 - #{T <= k} / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalCurve {
    crossings: Vec<u64>,
    censored: u64,
    n_paths: u64,
    p_hat: Vec<f64>,
    elapsed_seconds: f64,
    method: Option<SamplerKind>,
    start_condition_ok: bool,
}

impl SurvivalCurve {
    /// Builds a curve from `crossings[t-1] = #{T = t}` and the censored count.
    pub fn from_tally(crossings: Vec<u64>, censored: u64) -> Result<Self> {
        let n_paths = crossings.iter().sum::<u64>() + censored;
        if n_paths == 0 {
            return Err(Error::Parameter(
                "survival curve needs at least one path".into(),
            ));
        }
        let mut p_hat = Vec::with_capacity(crossings.len() + 1);
        p_hat.push(1.0);
        let mut surviving = n_paths;
        for &c in &crossings {
            surviving -= c;
            p_hat.push(surviving as f64 / n_paths as f64);
        }
        Ok(Self {
            crossings,
            censored,
            n_paths,
            p_hat,
            elapsed_seconds: 0.0,
            method: None,
            start_condition_ok: true,
        })
    }

    pub fn k_max(&self) -> usize {
        self.crossings.len()
    }

    pub fn n_paths(&self) -> u64 {
        self.n_paths
    }

    /// `p_hat[k]` for `0 <= k <= k_max`, with `p_hat[0] = 1`.
    pub fn p_hat(&self, k: usize) -> f64 {
        self.p_hat[k]
    }

    /// `p_hat[1..=k_max]`.
    pub fn survival(&self) -> &[f64] {
        &self.p_hat[1..]
    }

    pub fn crossings_at(&self, t: usize) -> u64 {
        self.crossings[t - 1]
    }

    pub fn crossings(&self) -> &[u64] {
        &self.crossings
    }

    pub fn censored(&self) -> u64 {
        self.censored
    }

    /// Binomial standard error of `p_hat[k]`.
    pub fn stderr(&self, k: usize) -> f64 {
        let p = self.p_hat[k];
        (p * (1.0 - p) / self.n_paths as f64).sqrt()
    }

    /// Wilson score interval for `P_k` at normal quantile `z`.
    pub fn wilson_interval_z(&self, k: usize, z: f64) -> (f64, f64) {
        let n = self.n_paths as f64;
        let p = self.p_hat[k];
        let z2 = z * z;
        let denom = 1.0 + z2 / n;
        let centre = (p + z2 / (2.0 * n)) / denom;
        let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        ((centre - half).max(0.0), (centre + half).min(1.0))
    }

    /// 99% Wilson interval.
    pub fn wilson_interval(&self, k: usize) -> (f64, f64) {
        self.wilson_interval_z(k, Z_99)
    }

    pub fn elapsed_seconds(&self) -> f64 {
        self.elapsed_seconds
    }

    pub fn method(&self) -> Option<SamplerKind> {
        self.method
    }

    /// False when `S_0 <= 0`, i.e. the start point `X_0 = 0` is not below the
    /// boundary. The orthant probabilities are unaffected.
    pub fn start_condition_ok(&self) -> bool {
        self.start_condition_ok
    }
}

/// Simulates `n_paths` paths of length `k_max` and tallies first crossings.
pub fn estimate_orthant_fpt<T: Scalar>(
    problem: &OrthantProblem<T>,
    n_paths: usize,
    stream: &RandomStream,
    method: SamplingMethod,
) -> Result<SurvivalCurve> {
    let start = Instant::now();
    let sampler = PathSampler::new(problem.cov(), problem.k_max(), method)?;
    let mut curve = estimate_with_sampler(&sampler, &problem.thresholds(), n_paths, stream)?;
    curve.elapsed_seconds = start.elapsed().as_secs_f64();
    curve.start_condition_ok = problem.boundary().start_condition_holds();
    Ok(curve)
}

/// Crossing tally with a prebuilt sampler; `thresholds` must cover its path
/// length.
pub fn estimate_with_sampler<T: Scalar>(
    sampler: &PathSampler<T>,
    thresholds: &[T],
    n_paths: usize,
    stream: &RandomStream,
) -> Result<SurvivalCurve> {
    if n_paths == 0 {
        return Err(Error::Parameter("n_paths must be at least 1".into()));
    }
    let k = sampler.n_points();
    if thresholds.len() < k {
        return Err(Error::Shape(format!(
            "{} thresholds for paths of length {k}",
            thresholds.len()
        )));
    }
    let start = Instant::now();
    // slot k counts censored paths
    let counts = (0..n_paths as u64)
        .into_par_iter()
        .fold(
            || (vec![0u64; k + 1], Vec::new(), vec![T::zero(); k]),
            |(mut counts, mut scratch, mut path), p| {
                sampler.fill_indexed_path(stream, p, &mut path, &mut scratch);
                let slot = first_crossing_thresholds(&path, thresholds).unwrap_or(k);
                counts[slot] += 1;
                (counts, scratch, path)
            },
        )
        .map(|(counts, _, _)| counts)
        .reduce(
            || vec![0u64; k + 1],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let censored = counts[k];
    let mut curve = SurvivalCurve::from_tally(counts[..k].to_vec(), censored)?;
    curve.elapsed_seconds = start.elapsed().as_secs_f64();
    curve.method = Some(sampler.kind());
    Ok(curve)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FairnessViolation {
    pub k: usize,
    pub p_hat: f64,
    pub stderr: f64,
    pub bound: f64,
}

/// Outcome of comparing a survival curve with per-`k` upper bounds.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FairnessReport {
    pub checked: usize,
    pub violations: Vec<FairnessViolation>,
}

impl FairnessReport {
    pub fn is_fair(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Flags every `k` with `p_hat[k] - 3 stderr[k] > bounds[k-1]`.
pub fn fairness_bound_check(curve: &SurvivalCurve, bounds: &[f64]) -> FairnessReport {
    let checked = bounds.len().min(curve.k_max());
    let violations = (1..=checked)
        .filter_map(|k| {
            let p_hat = curve.p_hat(k);
            let stderr = curve.stderr(k);
            let bound = bounds[k - 1];
            (p_hat - 3.0 * stderr > bound).then_some(FairnessViolation {
                k,
                p_hat,
                stderr,
                bound,
            })
        })
        .collect();
    FairnessReport {
        checked,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::normal_cdf;

    fn arfima(d: f64, lags: usize) -> CovarianceSequence<f64> {
        CovarianceSequence::arfima(d, lags).unwrap()
    }

    #[test]
    fn first_crossing_examples() {
        let one = Boundary::Constant(1.0);
        assert_eq!(first_crossing(&[2.0, 0.0], &one), Some(1));
        assert_eq!(first_crossing(&[-1.0; 5], &one), None);
        let lin = Boundary::Linear {
            intercept: 2.0,
            slope: -0.01,
        };
        assert_eq!(first_crossing(&[0.5, 1.9, 2.5], &lin), Some(3));
        // touching counts as crossing
        assert_eq!(first_crossing(&[0.0, 1.0], &one), Some(2));
    }

    #[test]
    fn boundary_parsing() {
        assert_eq!(
            Boundary::<f64>::parse("const:1").unwrap(),
            Boundary::Constant(1.0)
        );
        assert_eq!(
            Boundary::<f64>::parse("lin:2,-0.01").unwrap(),
            Boundary::Linear {
                intercept: 2.0,
                slope: -0.01
            }
        );
        assert!(Boundary::<f64>::parse("lin:2").is_err());
        assert!(Boundary::<f64>::parse("exp:1").is_err());
        assert!(Boundary::<f64>::parse("const:x").is_err());
        assert!(Boundary::<f64>::parse("1.0").is_err());
        let t = Boundary::<f64>::parse_table("# S_t\n1.5\n1.25\n").unwrap();
        assert_eq!(t.at(0), f64::INFINITY);
        assert_eq!(t.at(2), 1.25);
        assert!(t.thresholds(3).is_err());
        assert!(Boundary::<f64>::parse_table("# nothing\n").is_err());
    }

    #[test]
    fn boundary_helpers() {
        let lin = Boundary::Linear {
            intercept: 2.0,
            slope: -0.01,
        };
        assert!((lin.sup_over(40) - 1.99f64).abs() < 1e-15);
        assert!(lin.start_condition_holds());
        assert!(!Boundary::Constant(0.0).start_condition_holds());
        assert_eq!(lin.to_string(), "lin:2,-0.01");
    }

    #[test]
    fn tally_identities() {
        let curve = SurvivalCurve::from_tally(vec![3, 0, 5, 2], 10).unwrap();
        assert_eq!(curve.n_paths(), 20);
        assert_eq!(
            curve.survival(),
            &[17.0 / 20.0, 17.0 / 20.0, 12.0 / 20.0, 10.0 / 20.0]
        );
        for k in 1..=4 {
            let mass = curve.crossings_at(k) as f64 / 20.0;
            assert!((curve.p_hat(k - 1) - curve.p_hat(k) - mass).abs() < 1e-15);
        }
        assert!(SurvivalCurve::from_tally(vec![0, 0], 0).is_err());
    }

    #[test]
    fn wilson_interval_contains_estimate() {
        let curve = SurvivalCurve::from_tally(vec![10, 0], 90).unwrap();
        let (lo, hi) = curve.wilson_interval(1);
        assert!(lo < 0.9 && 0.9 < hi);
        let curve = SurvivalCurve::from_tally(vec![0], 50).unwrap();
        let (lo, hi) = curve.wilson_interval(1);
        assert!(lo < 1.0 && hi == 1.0);
    }

    #[test]
    fn white_noise_matches_product_of_cdfs() {
        let problem = OrthantProblem::new(arfima(0.0, 4), Boundary::Constant(1.0), 5).unwrap();
        let curve = estimate_orthant_fpt(
            &problem,
            100_000,
            &RandomStream::new(10, 0),
            SamplingMethod::Auto,
        )
        .unwrap();
        let target = normal_cdf(1.0f64).powi(5);
        assert!((curve.p_hat(5) - target).abs() <= 3.0 * (target * (1.0 - target) / 1e5).sqrt());
        assert_eq!(curve.method(), Some(SamplerKind::DaviesHarte));
    }

    #[test]
    fn problem_validation() {
        assert!(OrthantProblem::new(arfima(0.2, 3), Boundary::Constant(1.0), 0).is_err());
        let p = OrthantProblem::new(arfima(0.2, 3), Boundary::Constant(1.0), 10).unwrap();
        assert_eq!(p.cov().max_lag(), 9);
        let short = CovarianceSequence::tabulated(vec![1.0, 0.2]).unwrap();
        assert!(OrthantProblem::new(short, Boundary::Constant(1.0), 5).is_err());
        let table = Boundary::Tabulated(vec![1.0, 1.0]);
        assert!(OrthantProblem::new(arfima(0.2, 3), table, 3).is_err());
    }

    #[test]
    fn fairness_detector() {
        let curve = SurvivalCurve::from_tally(vec![0; 3], 1_000_000).unwrap();
        let report = fairness_bound_check(&curve, &[0.9, 0.9, 1.0]);
        assert_eq!(report.checked, 3);
        assert_eq!(
            report.violations.iter().map(|v| v.k).collect::<Vec<_>>(),
            vec![1, 2]
        );
        assert!(!report.is_fair());
        assert!(fairness_bound_check(&curve, &[1.0; 3]).is_fair());
    }
}

//! Covariance models, circulant embedding spectra, Toeplitz matrices and
//! Cholesky factors.

use std::fmt;
use std::ops::Index;
use std::path::Path;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::num::{Direction, FftPlan};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CovarianceModel {
    /// Fractionally integrated white noise with memory parameter `d`.
    Arfima { d: f64 },
    /// User-supplied autocorrelations; zero beyond the last tabulated lag.
    Tabulated,
}

impl fmt::Display for CovarianceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CovarianceModel::Arfima { d } => write!(f, "arfima(d={d})"),
            CovarianceModel::Tabulated => write!(f, "tabulated"),
        }
    }
}

/// Autocorrelations `rho[0..=L]` of a standardized stationary series.
///
/// `rho[0] == 1` and `|rho[j]| <= 1` always hold. Positive definiteness is
/// not checked here; [`cholesky`] and [`circulant_spectrum`] report it.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceSequence<T> {
    rho: Vec<T>,
    model: CovarianceModel,
}

fn arfima_rho(d: f64, max_lag: usize) -> Vec<f64> {
    let mut rho = Vec::with_capacity(max_lag + 1);
    rho.push(1.0);
    for k in 1..=max_lag {
        let kf = k as f64;
        rho.push(rho[k - 1] * (d + kf - 1.0) / (kf - d));
    }
    rho
}

impl<T: Scalar> CovarianceSequence<T> {
    pub fn arfima(d: f64, max_lag: usize) -> Result<Self> {
        if !(d.abs() < 0.5) {
            return Err(Error::Parameter(format!(
                "ARFIMA memory parameter must satisfy |d| < 0.5, got {d}"
            )));
        }
        Ok(Self {
            rho: arfima_rho(d, max_lag).into_iter().map(T::lit).collect(),
            model: CovarianceModel::Arfima { d },
        })
    }

    pub fn tabulated(values: Vec<T>) -> Result<Self> {
        let Some(&first) = values.first() else {
            return Err(Error::Format("covariance table is empty".into()));
        };
        if (first.as_f64() - 1.0).abs() > 1e-12 {
            return Err(Error::Format(format!("rho_0 must equal 1, got {first}")));
        }
        if let Some((j, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || v.abs() > T::one())
        {
            return Err(Error::Format(format!(
                "|rho_{j}| must be at most 1, got {v}"
            )));
        }
        let mut rho = values;
        rho[0] = T::one();
        Ok(Self {
            rho,
            model: CovarianceModel::Tabulated,
        })
    }

    /// One real per line, line `i` holding `rho_{i-1}`; blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse_tabulated(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| {
                Error::Format(format!("line {}: not a number: {line:?}", lineno + 1))
            })?;
            values.push(T::lit(v));
        }
        Self::tabulated(values)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_tabulated(&std::fs::read_to_string(path)?)
    }

    pub fn rho(&self) -> &[T] {
        &self.rho
    }

    pub fn lag(&self, j: usize) -> Option<T> {
        self.rho.get(j).copied()
    }

    pub fn max_lag(&self) -> usize {
        self.rho.len() - 1
    }

    pub fn model(&self) -> CovarianceModel {
        self.model
    }

    /// Same model over lags `0..=max_lag`. ARFIMA sequences are recomputed;
    /// tabulated ones can only be truncated.
    pub fn with_max_lag(&self, max_lag: usize) -> Result<Self> {
        match self.model {
            CovarianceModel::Arfima { d } => Self::arfima(d, max_lag),
            CovarianceModel::Tabulated => {
                if max_lag > self.max_lag() {
                    return Err(Error::Shape(format!(
                        "need lags up to {max_lag}, table stops at lag {}",
                        self.max_lag()
                    )));
                }
                Ok(Self {
                    rho: self.rho[..=max_lag].to_vec(),
                    model: self.model,
                })
            }
        }
    }

    /// Largest correlation over lags `1..=max_lag`, or `None` if `max_lag == 0`.
    pub fn max_correlation(&self, max_lag: usize) -> Option<T> {
        self.rho[1..=max_lag.min(self.max_lag())]
            .iter()
            .copied()
            .reduce(T::max)
    }

    /// Autocorrelation at any lag for embedding purposes: the model's own
    /// value for ARFIMA, zero past the end of a table.
    fn extended_lags(&self, max_lag: usize) -> Vec<T> {
        match self.model {
            CovarianceModel::Arfima { d } if max_lag > self.max_lag() => {
                arfima_rho(d, max_lag).into_iter().map(T::lit).collect()
            }
            _ => (0..=max_lag)
                .map(|j| self.lag(j).unwrap_or_else(T::zero))
                .collect(),
        }
    }
}

pub fn arfima_covariance<T: Scalar>(d: f64, max_lag: usize) -> Result<CovarianceSequence<T>> {
    CovarianceSequence::arfima(d, max_lag)
}

pub fn load_tabulated_covariance<T: Scalar>(values: &[T]) -> Result<CovarianceSequence<T>> {
    CovarianceSequence::tabulated(values.to_vec())
}

/// Power-of-two circulant length used to simulate `n_points` values: the
/// smallest power of two at least `2 (n_points - 1)`.
pub fn embedding_length(n_points: usize) -> usize {
    (2 * n_points.saturating_sub(1)).max(2).next_power_of_two()
}

/// Eigenvalues of the circulant matrix embedding the Toeplitz covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSpectrum<T> {
    g: Vec<T>,
    n_points: usize,
    min_eigenvalue: T,
}

impl<T: Scalar> CirculantSpectrum<T> {
    /// Eigenvalues after clamping roundoff negatives to zero.
    pub fn g(&self) -> &[T] {
        &self.g
    }

    pub fn embedding_len(&self) -> usize {
        self.g.len()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Smallest eigenvalue before clamping.
    pub fn min_eigenvalue(&self) -> T {
        self.min_eigenvalue
    }
}

/// Builds the even sequence `rho_0, ..., rho_{M/2}, rho_{M/2-1}, ..., rho_1`
/// of length `M = embedding_length(n_points)` and returns its forward DFT.
pub fn circulant_spectrum<T: Scalar>(
    cov: &CovarianceSequence<T>,
    n_points: usize,
) -> Result<CirculantSpectrum<T>> {
    if n_points < 2 {
        return Err(Error::Parameter(format!(
            "embedding needs n_points >= 2, got {n_points}"
        )));
    }
    if cov.max_lag() + 1 < n_points && cov.model == CovarianceModel::Tabulated {
        return Err(Error::Shape(format!(
            "embedding {n_points} points needs lags up to {}, table stops at lag {}",
            n_points - 1,
            cov.max_lag()
        )));
    }
    let m = embedding_length(n_points);
    let half = m / 2;
    let lags = cov.extended_lags(half);
    let mut buf: Vec<Complex<T>> = (0..m)
        .map(|j| Complex::new(lags[j.min(m - j)], T::zero()))
        .collect();
    let scale = buf.iter().map(|c| c.re.abs()).sum::<T>().max(T::one());
    FftPlan::new(m)?.process(&mut buf, Direction::Forward);

    let tol = T::lit(T::ROUNDOFF_TOL);
    let residue = buf.iter().map(|c| c.im.abs()).fold(T::zero(), T::max);
    assert!(
        residue <= tol * scale,
        "imaginary residue {residue} in the spectrum of an even sequence"
    );
    let min_eigenvalue = buf.iter().map(|c| c.re).fold(T::infinity(), T::min);
    if min_eigenvalue < -tol {
        return Err(Error::NotNonNegativeDefinite {
            min_eigenvalue: min_eigenvalue.as_f64(),
        });
    }
    let g = buf.iter().map(|c| c.re.max(T::zero())).collect();
    Ok(CirculantSpectrum {
        g,
        n_points,
        min_eigenvalue,
    })
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(
                "matrix rows must all have length equal to the row count".into(),
            ));
        }
        Ok(Self {
            n,
            data: rows.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    pub fn max_abs_diff(&self, other: &Matrix<T>) -> T {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

/// `Sigma_ij = rho[|i - j|]` for `i, j < k`.
pub fn toeplitz_matrix<T: Scalar>(cov: &CovarianceSequence<T>, k: usize) -> Result<Matrix<T>> {
    if k == 0 {
        return Err(Error::Shape("Toeplitz dimension must be at least 1".into()));
    }
    if cov.max_lag() + 1 < k {
        return Err(Error::Shape(format!(
            "dimension {k} needs lags up to {}, sequence stops at lag {}",
            k - 1,
            cov.max_lag()
        )));
    }
    let mut m = Matrix::zeros(k);
    for i in 0..k {
        for j in 0..k {
            m.set(i, j, cov.rho[i.abs_diff(j)]);
        }
    }
    Ok(m)
}

/// Lower-triangular `C` with `C C^T = Sigma`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor<T> {
    c: Matrix<T>,
}

impl<T: Scalar> CholeskyFactor<T> {
    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.c[(i, j)]
    }

    /// Row `i` up to and including the diagonal.
    pub fn lower_row(&self, i: usize) -> &[T] {
        &self.c.row(i)[..=i]
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.c
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        let n = self.dim();
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let s = (0..=i.min(j))
                    .map(|l| self.c[(i, l)] * self.c[(j, l)])
                    .sum();
                out.set(i, j, s);
            }
        }
        out
    }
}

pub fn cholesky<T: Scalar>(sigma: &Matrix<T>) -> Result<CholeskyFactor<T>> {
    let n = sigma.dim();
    if n == 0 {
        return Err(Error::Shape("cannot factor an empty matrix".into()));
    }
    if !sigma.is_symmetric(T::lit(T::ROUNDOFF_TOL)) {
        return Err(Error::Parameter("Cholesky input is not symmetric".into()));
    }
    let mut c = Matrix::zeros(n);
    for j in 0..n {
        let mut d = sigma[(j, j)];
        for l in 0..j {
            d -= c[(j, l)] * c[(j, l)];
        }
        if !(d > T::lit(T::PIVOT_TOL)) {
            return Err(Error::NotPositiveDefinite {
                index: j,
                pivot: d.as_f64(),
            });
        }
        let djj = d.sqrt();
        c.set(j, j, djj);
        for i in j + 1..n {
            let mut s = sigma[(i, j)];
            for l in 0..j {
                s -= c[(i, l)] * c[(j, l)];
            }
            c.set(i, j, s / djj);
        }
    }
    Ok(CholeskyFactor { c })
}

//! Exact sample paths of a zero-mean, unit-variance stationary Gaussian
//! series.
//!
//! Two samplers share one contract: [`DaviesHartePlan`] (circulant embedding,
//! `O(M log M)` per path) and [`DurbinLevinsonPlan`] (partial
//! autocorrelation recursion, `O(k^2)` per path). Path `p` of a batch always
//! draws from substream `stream_id + p`, so a batch is bit-identical however
//! many threads produce it.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;

use crate::covariance::{circulant_spectrum, CirculantSpectrum, CovarianceSequence, Matrix};
use crate::error::{Error, Result};
use crate::num::{Direction, FftPlan, RandomStream};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplerKind {
    DaviesHarte,
    DurbinLevinson,
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SamplerKind::DaviesHarte => "davies_harte",
            SamplerKind::DurbinLevinson => "durbin_levinson",
        })
    }
}

/// Sampler selection. `Auto` prefers Davies–Harte and falls back to
/// Durbin–Levinson when the circulant embedding has negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingMethod {
    #[default]
    Auto,
    DaviesHarte,
    DurbinLevinson,
}

impl FromStr for SamplingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "auto" => Ok(SamplingMethod::Auto),
            "davies_harte" | "dh" => Ok(SamplingMethod::DaviesHarte),
            "durbin_levinson" | "dl" => Ok(SamplingMethod::DurbinLevinson),
            other => Err(Error::Parameter(format!(
                "unknown sampling method {other:?}"
            ))),
        }
    }
}

/// Precomputed circulant spectrum for sampling `n_points` values.
#[derive(Debug, Clone)]
pub struct DaviesHartePlan<T> {
    spectrum: CirculantSpectrum<T>,
    n_points: usize,
    sqrt_g: Vec<T>,
    fft: FftPlan<T>,
    cov_tag: String,
}

impl<T: Scalar> DaviesHartePlan<T> {
    pub fn new(cov: &CovarianceSequence<T>, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter(format!(
                "Davies-Harte needs k >= 2, got {k}"
            )));
        }
        let spectrum = circulant_spectrum(cov, k)?;
        let sqrt_g = spectrum.g().iter().map(|g| g.sqrt()).collect();
        let fft = FftPlan::new(spectrum.embedding_len())?;
        Ok(Self {
            spectrum,
            n_points: k,
            sqrt_g,
            fft,
            cov_tag: cov.model().to_string(),
        })
    }

    pub fn spectrum(&self) -> &CirculantSpectrum<T> {
        &self.spectrum
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn embedding_len(&self) -> usize {
        self.sqrt_g.len()
    }

    pub fn sqrt_g(&self) -> &[T] {
        &self.sqrt_g
    }

    /// Writes one path of `n_points` values into `out`, consuming exactly
    /// `embedding_len()` normals from `rng`.
    pub fn fill_path(&self, rng: &mut RandomStream, out: &mut [T], buf: &mut Vec<Complex<T>>) {
        let m = self.embedding_len();
        let half = m / 2;
        let sqrt2 = T::SQRT_2();
        buf.clear();
        buf.resize(m, Complex::new(T::zero(), T::zero()));

        // Z_0 and Z_{M/2} are real N(0, 2); the rest complex with unit-variance
        // parts and Z_{M-n} = conj(Z_n).
        let z0 = sqrt2 * T::lit(rng.next_standard_normal());
        buf[0] = Complex::new(z0 * self.sqrt_g[0], T::zero());
        let zh = sqrt2 * T::lit(rng.next_standard_normal());
        buf[half] = Complex::new(zh * self.sqrt_g[half], T::zero());
        for n in 1..half {
            let re = T::lit(rng.next_standard_normal()) * self.sqrt_g[n];
            let im = T::lit(rng.next_standard_normal()) * self.sqrt_g[n];
            buf[n] = Complex::new(re, im);
            buf[m - n] = Complex::new(re, -im);
        }
        self.fft.process(buf, Direction::Forward);

        let scale = T::one() / (T::from_count(2 * m)).sqrt();
        let tol = T::lit(T::ROUNDOFF_TOL);
        for (x, z) in out[..self.n_points].iter_mut().zip(buf.iter()) {
            assert!(
                z.im.abs() * scale <= tol * (z.re.abs() * scale).max(T::one()),
                "imaginary residue {} in a Hermitian synthesis",
                z.im * scale
            );
            *x = z.re * scale;
        }
    }
}

/// Prediction coefficients `phi_{t,j}` and innovation standard deviations
/// of the Durbin–Levinson recursion up to order `k - 1`.
#[derive(Debug, Clone)]
pub struct DurbinLevinsonPlan<T> {
    k: usize,
    // row t (1-based) occupies phi[t(t-1)/2 .. t(t+1)/2]
    phi: Vec<T>,
    sd: Vec<T>,
    cov_tag: String,
}

impl<T: Scalar> DurbinLevinsonPlan<T> {
    pub fn new(cov: &CovarianceSequence<T>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("path length must be at least 1".into()));
        }
        let cov = if cov.max_lag() + 1 < k {
            cov.with_max_lag(k - 1)?
        } else {
            cov.clone()
        };
        let rho = cov.rho();
        let mut phi: Vec<T> = Vec::with_capacity(k * (k - 1) / 2);
        let mut v = vec![T::one()];
        let mut prev: Vec<T> = Vec::new();
        for t in 1..k {
            let mut acc = rho[t];
            for j in 1..t {
                acc -= prev[j - 1] * rho[t - j];
            }
            let ptt = acc / v[t - 1];
            let mut row: Vec<T> = (1..t)
                .map(|j| prev[j - 1] - ptt * prev[t - j - 1])
                .collect();
            row.push(ptt);
            let vt = v[t - 1] * (T::one() - ptt * ptt);
            if !(vt > T::lit(T::PIVOT_TOL)) {
                return Err(Error::NotPositiveDefinite {
                    index: t,
                    pivot: vt.as_f64(),
                });
            }
            v.push(vt);
            phi.extend_from_slice(&row);
            prev = row;
        }
        Ok(Self {
            k,
            phi,
            sd: v.into_iter().map(T::sqrt).collect(),
            cov_tag: cov.model().to_string(),
        })
    }

    pub fn n_points(&self) -> usize {
        self.k
    }

    /// Coefficients `phi_{t,1..=t}` predicting `X_{t+1}` from `X_t, ..., X_1`.
    pub fn phi_row(&self, t: usize) -> &[T] {
        assert!(t >= 1 && t < self.k, "order {t} outside 1..{}", self.k);
        let start = t * (t - 1) / 2;
        &self.phi[start..start + t]
    }

    pub fn phi(&self, t: usize, j: usize) -> T {
        self.phi_row(t)[j - 1]
    }

    /// Standard deviation of the one-step prediction error at order `t`.
    pub fn innovation_sd(&self, t: usize) -> T {
        self.sd[t]
    }

    /// Writes one path into `out`, consuming exactly `n_points()` normals.
    pub fn fill_path(&self, rng: &mut RandomStream, out: &mut [T]) {
        out[0] = self.sd[0] * T::lit(rng.next_standard_normal());
        for t in 1..self.k {
            let pred: T = self
                .phi_row(t)
                .iter()
                .enumerate()
                .map(|(j, &c)| c * out[t - 1 - j])
                .sum();
            out[t] = pred + self.sd[t] * T::lit(rng.next_standard_normal());
        }
    }
}

/// Either sampler behind one path-filling interface.
#[derive(Debug, Clone)]
pub enum PathSampler<T> {
    DaviesHarte(DaviesHartePlan<T>),
    DurbinLevinson(DurbinLevinsonPlan<T>),
}

/// Per-thread working memory for [`PathSampler::fill_path`].
pub type Scratch<T> = Vec<Complex<T>>;

impl<T: Scalar> PathSampler<T> {
    pub fn new(cov: &CovarianceSequence<T>, k: usize, method: SamplingMethod) -> Result<Self> {
        match method {
            SamplingMethod::DaviesHarte => Ok(Self::DaviesHarte(DaviesHartePlan::new(cov, k)?)),
            SamplingMethod::DurbinLevinson => {
                Ok(Self::DurbinLevinson(DurbinLevinsonPlan::new(cov, k)?))
            }
            SamplingMethod::Auto if k < 2 => {
                Ok(Self::DurbinLevinson(DurbinLevinsonPlan::new(cov, k)?))
            }
            SamplingMethod::Auto => match DaviesHartePlan::new(cov, k) {
                Ok(plan) => Ok(Self::DaviesHarte(plan)),
                Err(Error::NotNonNegativeDefinite { .. }) => {
                    Ok(Self::DurbinLevinson(DurbinLevinsonPlan::new(cov, k)?))
                }
                Err(e) => Err(e),
            },
        }
    }

    pub fn kind(&self) -> SamplerKind {
        match self {
            Self::DaviesHarte(_) => SamplerKind::DaviesHarte,
            Self::DurbinLevinson(_) => SamplerKind::DurbinLevinson,
        }
    }

    pub fn n_points(&self) -> usize {
        match self {
            Self::DaviesHarte(p) => p.n_points(),
            Self::DurbinLevinson(p) => p.n_points(),
        }
    }

    fn cov_tag(&self) -> &str {
        match self {
            Self::DaviesHarte(p) => &p.cov_tag,
            Self::DurbinLevinson(p) => &p.cov_tag,
        }
    }

    #[inline]
    pub fn fill_path(&self, rng: &mut RandomStream, out: &mut [T], scratch: &mut Scratch<T>) {
        match self {
            Self::DaviesHarte(p) => p.fill_path(rng, out, scratch),
            Self::DurbinLevinson(p) => p.fill_path(rng, out),
        }
    }

    /// Fills `out` with path number `index` of the batch rooted at `stream`.
    #[inline]
    pub fn fill_indexed_path(
        &self,
        stream: &RandomStream,
        index: u64,
        out: &mut [T],
        scratch: &mut Scratch<T>,
    ) {
        let mut rng = stream.substream(index);
        self.fill_path(&mut rng, out, scratch);
    }

    pub fn sample(&self, n_paths: usize, stream: &RandomStream) -> Result<PathBatch<T>> {
        if n_paths == 0 {
            return Err(Error::Parameter("n_paths must be at least 1".into()));
        }
        let k = self.n_points();
        let mut data = vec![T::zero(); n_paths * k];
        data.par_chunks_mut(k)
            .enumerate()
            .for_each_init(Vec::new, |scratch, (p, row)| {
                self.fill_indexed_path(stream, p as u64, row, scratch);
            });
        Ok(PathBatch {
            data,
            n_paths,
            k,
            seed: stream.master_seed(),
            stream_id: stream.stream_id(),
            method: self.kind(),
            cov_tag: self.cov_tag().to_owned(),
        })
    }
}

/// `n_paths` realizations of `X_1..X_k`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PathBatch<T> {
    data: Vec<T>,
    n_paths: usize,
    k: usize,
    seed: u64,
    stream_id: u64,
    method: SamplerKind,
    cov_tag: String,
}

impl<T: Scalar> PathBatch<T> {
    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn method(&self) -> SamplerKind {
        self.method
    }

    pub fn cov_tag(&self) -> &str {
        &self.cov_tag
    }

    pub fn path(&self, i: usize) -> &[T] {
        &self.data[i * self.k..(i + 1) * self.k]
    }

    pub fn paths(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        self.data.chunks_exact(self.k)
    }

    pub fn values(&self) -> &[T] {
        &self.data
    }

    /// Second-moment matrix `E[X_p X_q]` over the batch (the mean is known
    /// to be zero).
    pub fn sample_covariance(&self) -> Matrix<f64> {
        let k = self.k;
        let mut acc = vec![0.0f64; k * k];
        for path in self.paths() {
            for p in 0..k {
                let xp = path[p].as_f64();
                for q in p..k {
                    acc[p * k + q] += xp * path[q].as_f64();
                }
            }
        }
        let mut m = Matrix::zeros(k);
        let n = self.n_paths as f64;
        for p in 0..k {
            for q in p..k {
                m.set(p, q, acc[p * k + q] / n);
                m.set(q, p, acc[p * k + q] / n);
            }
        }
        m
    }

    /// One path per line, values comma-separated.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for path in self.paths() {
            let line: Vec<String> = path.iter().map(|x| x.to_string()).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

pub fn make_plan<T: Scalar>(cov: &CovarianceSequence<T>, k: usize) -> Result<DaviesHartePlan<T>> {
    DaviesHartePlan::new(cov, k)
}

pub fn sample_davies_harte<T: Scalar>(
    plan: &DaviesHartePlan<T>,
    n_paths: usize,
    stream: &RandomStream,
) -> Result<PathBatch<T>> {
    PathSampler::DaviesHarte(plan.clone()).sample(n_paths, stream)
}

pub fn sample_durbin_levinson<T: Scalar>(
    cov: &CovarianceSequence<T>,
    k: usize,
    n_paths: usize,
    stream: &RandomStream,
) -> Result<PathBatch<T>> {
    PathSampler::DurbinLevinson(DurbinLevinsonPlan::new(cov, k)?).sample(n_paths, stream)
}

pub fn sample_paths<T: Scalar>(
    cov: &CovarianceSequence<T>,
    k: usize,
    n_paths: usize,
    stream: &RandomStream,
    method: SamplingMethod,
) -> Result<PathBatch<T>> {
    PathSampler::new(cov, k, method)?.sample(n_paths, stream)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::RunningStats;

    fn arfima(d: f64, lags: usize) -> CovarianceSequence<f64> {
        CovarianceSequence::arfima(d, lags).unwrap()
    }

    fn non_embeddable() -> CovarianceSequence<f64> {
        CovarianceSequence::tabulated(vec![1.0, -0.95, 0.85, -0.75]).unwrap()
    }

    #[test]
    fn plan_for_white_noise() {
        let plan = make_plan(&arfima(0.0, 7), 8).unwrap();
        assert!(plan.sqrt_g().iter().all(|&s| (s - 1.0).abs() < 1e-15));
    }

    #[test]
    fn plan_embedding_length_and_sqrt() {
        let plan = make_plan(&arfima(0.2, 19), 20).unwrap();
        assert_eq!(plan.embedding_len(), 64);
        for (s, g) in plan.sqrt_g().iter().zip(plan.spectrum().g()) {
            assert!((s * s - g).abs() <= 1e-12);
        }
    }

    #[test]
    fn plan_rejects_negative_spectrum() {
        assert!(matches!(
            make_plan(&non_embeddable(), 4),
            Err(Error::NotNonNegativeDefinite { .. })
        ));
        assert!(matches!(
            make_plan(&arfima(0.2, 3), 1),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn davies_harte_white_noise_is_uncorrelated() {
        let plan = make_plan(&arfima(0.0, 7), 8).unwrap();
        let batch = sample_davies_harte(&plan, 100_000, &RandomStream::new(1, 0)).unwrap();
        let lag1: RunningStats = batch
            .paths()
            .flat_map(|p| p.windows(2).map(|w| w[0] * w[1]).collect::<Vec<_>>())
            .collect();
        assert!(lag1.mean().abs() <= 0.01, "lag-1 {}", lag1.mean());
    }

    #[test]
    fn davies_harte_lag_one_correlation() {
        let plan = make_plan(&arfima(0.2, 31), 32).unwrap();
        let batch = sample_davies_harte(&plan, 100_000, &RandomStream::new(2, 0)).unwrap();
        let lag1: RunningStats = batch.paths().map(|p| p[0] * p[1]).collect();
        assert!((lag1.mean() - 0.25).abs() <= 0.01, "lag-1 {}", lag1.mean());
    }

    #[test]
    fn batches_are_deterministic_and_thread_independent() {
        let plan = make_plan(&arfima(0.3, 40), 40).unwrap();
        let stream = RandomStream::new(77, 5);
        let a = sample_davies_harte(&plan, 500, &stream).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| sample_davies_harte(&plan, 500, &stream).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.seed(), 77);
        assert_eq!(a.method(), SamplerKind::DaviesHarte);
        // path p is substream p regardless of batch size
        let small = sample_davies_harte(&plan, 3, &stream).unwrap();
        assert_eq!(small.path(2), a.path(2));
    }

    #[test]
    fn durbin_levinson_coefficients() {
        let plan = DurbinLevinsonPlan::new(&arfima(0.2, 5), 6).unwrap();
        assert!((plan.phi(1, 1) - 0.25).abs() < 1e-15);
        assert_eq!(plan.innovation_sd(0), 1.0);
        assert!((plan.innovation_sd(1) - (1.0f64 - 0.0625).sqrt()).abs() < 1e-15);
        // ARFIMA(0,d,0): phi_{t,t} = d / (t - d)
        for t in 1..6 {
            assert!(
                (plan.phi(t, t) - 0.2 / (t as f64 - 0.2)).abs() < 1e-13,
                "t={t}"
            );
        }
    }

    #[test]
    fn durbin_levinson_solves_yule_walker() {
        let cov = arfima(0.35, 12);
        let plan = DurbinLevinsonPlan::new(&cov, 13).unwrap();
        let rho = cov.rho();
        for t in 1..13 {
            let row = plan.phi_row(t);
            for i in 1..=t {
                let lhs: f64 = (1..=t).map(|j| row[j - 1] * rho[i.abs_diff(j)]).sum();
                assert!((lhs - rho[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn durbin_levinson_white_noise_variance() {
        let batch =
            sample_durbin_levinson(&arfima(0.0, 7), 8, 100_000, &RandomStream::new(3, 0)).unwrap();
        let pooled: RunningStats = batch.values().iter().copied().collect();
        assert!((pooled.variance() - 1.0).abs() <= 0.01);
        assert_eq!(batch.method(), SamplerKind::DurbinLevinson);
    }

    #[test]
    fn durbin_levinson_rejects_singular() {
        let cov = CovarianceSequence::tabulated(vec![1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            DurbinLevinsonPlan::new(&cov, 3),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn auto_dispatch() {
        let s = RandomStream::new(4, 0);
        let b = sample_paths(&arfima(0.2, 16), 16, 10, &s, SamplingMethod::Auto).unwrap();
        assert_eq!(b.method(), SamplerKind::DaviesHarte);
        let b = sample_paths(&non_embeddable(), 4, 10, &s, SamplingMethod::Auto).unwrap();
        assert_eq!(b.method(), SamplerKind::DurbinLevinson);
        assert!(matches!(
            sample_paths(&non_embeddable(), 4, 10, &s, SamplingMethod::DaviesHarte),
            Err(Error::NotNonNegativeDefinite { .. })
        ));
        let b = sample_paths(&arfima(0.2, 0), 1, 10, &s, SamplingMethod::Auto).unwrap();
        assert_eq!(b.k(), 1);
    }

    #[test]
    fn method_parsing() {
        assert_eq!(
            "auto".parse::<SamplingMethod>().unwrap(),
            SamplingMethod::Auto
        );
        assert_eq!(
            "davies-harte".parse::<SamplingMethod>().unwrap(),
            SamplingMethod::DaviesHarte
        );
        assert_eq!(
            "durbin_levinson".parse::<SamplingMethod>().unwrap(),
            SamplingMethod::DurbinLevinson
        );
        assert!("fourier".parse::<SamplingMethod>().is_err());
    }

    #[test]
    fn csv_dump() {
        let b = sample_paths(
            &arfima(0.2, 3),
            4,
            2,
            &RandomStream::new(1, 0),
            SamplingMethod::Auto,
        )
        .unwrap();
        let mut out = Vec::new();
        b.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let rows: Vec<Vec<f64>> = text
            .lines()
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1], b.path(1));
    }

    #[test]
    fn f32_paths() {
        let cov = CovarianceSequence::<f32>::arfima(0.2, 31).unwrap();
        let plan = DaviesHartePlan::new(&cov, 32).unwrap();
        let batch = sample_davies_harte(&plan, 20_000, &RandomStream::new(9, 0)).unwrap();
        let lag1: f64 = batch.paths().map(|p| (p[0] * p[1]) as f64).sum::<f64>() / 20_000.0;
        assert!((lag1 - 0.25).abs() < 0.03);
    }
}

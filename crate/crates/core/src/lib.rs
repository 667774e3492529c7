//! Multivariate normal orthant probabilities through first passage times.
//!
//! For a zero-mean, unit-variance stationary Gaussian series `X_t` and an
//! absorbing boundary `S_t`, the orthant probability
//! `P(X_1 < S_1, ..., X_k < S_k)` is the probability that the first passage
//! time `T = min{t : X_t >= S_t}` exceeds `k`. [`fpt::estimate_orthant_fpt`]
//! simulates paths (Davies–Harte circulant embedding, or Durbin–Levinson as a
//! fallback) and reads the whole survival curve `k -> P(T > k)` off one batch.
//!
//! [`mvn_ref`] holds the Genz and GHK reference estimators and [`bounds`] the
//! Slepian upper bounds used to sanity-check every estimate.
//!
//! Numerical code is generic over [`Scalar`] (`f32`/`f64`); the aliases at the
//! crate root fix the scalar to `f64`.

// `!(x > tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod covariance;
mod error;
pub mod fpt;
pub mod mvn_ref;
pub mod num;
pub mod path_sim;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use bounds::BoundCase;
pub use covariance::CovarianceModel;
pub use fpt::{FairnessReport, SurvivalCurve};
pub use mvn_ref::{GenzResult, GhkResult};
pub use num::{Direction, RandomStream, RunningStats};
pub use path_sim::{SamplerKind, SamplingMethod};

pub type CovarianceSequence = covariance::CovarianceSequence<f64>;
pub type CirculantSpectrum = covariance::CirculantSpectrum<f64>;
pub type CholeskyFactor = covariance::CholeskyFactor<f64>;
pub type Matrix = covariance::Matrix<f64>;
pub type DaviesHartePlan = path_sim::DaviesHartePlan<f64>;
pub type DurbinLevinsonPlan = path_sim::DurbinLevinsonPlan<f64>;
pub type PathSampler = path_sim::PathSampler<f64>;
pub type PathBatch = path_sim::PathBatch<f64>;
pub type Boundary = fpt::Boundary<f64>;
pub type OrthantProblem = fpt::OrthantProblem<f64>;
pub type SlepianBound = bounds::SlepianBound<f64>;
pub type ComplexSequence = num::ComplexSequence<f64>;

pub type CovarianceSequenceF32 = covariance::CovarianceSequence<f32>;
pub type DaviesHartePlanF32 = path_sim::DaviesHartePlan<f32>;
pub type PathBatchF32 = path_sim::PathBatch<f32>;
pub type BoundaryF32 = fpt::Boundary<f32>;

//! Scalar numerical primitives shared by every estimator.

mod fft;
mod normal;
mod quadrature;
mod rng;
mod stats;

pub use fft::{fft, fft_in_place, ComplexSequence, Direction, FftPlan};
pub use normal::{normal_cdf, normal_pdf, normal_quantile};
pub use quadrature::{gauss_hermite_integrate, GaussHermite};
pub use rng::RandomStream;
pub use stats::RunningStats;

pub(crate) use normal::{cdf_f64, quantile_f64};

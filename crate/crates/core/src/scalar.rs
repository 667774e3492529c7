use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the numerical kernels are generic over (`f32` or `f64`).
///
/// Probabilities from special functions are always evaluated in `f64` and
/// converted, so `f32` instantiations trade only storage and FFT precision.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Absolute level below which spectral values and imaginary residues are
    /// treated as roundoff.
    const ROUNDOFF_TOL: f64;
    /// Smallest pivot accepted by Cholesky and Durbin–Levinson.
    const PIVOT_TOL: f64;

    /// Converts an `f64` literal or intermediate into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable")
    }
}

impl Scalar for f64 {
    const ROUNDOFF_TOL: f64 = 1e-9;
    const PIVOT_TOL: f64 = 1e-12;
}

impl Scalar for f32 {
    const ROUNDOFF_TOL: f64 = 1e-4;
    const PIVOT_TOL: f64 = 1e-6;
}

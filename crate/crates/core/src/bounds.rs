//! Slepian-inequality upper bounds on orthant probabilities.
//!
//! Raising every off-diagonal correlation to `rho_max` and every threshold to
//! `S_max` can only increase `P_k(S, Sigma)`. For `rho_max > 0` the result is
//! an exchangeable orthant,
//! `∫ Φ^k((S_max + sqrt(rho_max) z) / sqrt(1 - rho_max)) φ(z) dz`, evaluated
//! by Gauss–Hermite quadrature; for `rho_max <= 0` it is `Φ(S_max)^k`.

use crate::covariance::CovarianceSequence;
use crate::error::{Error, Result};
use crate::fpt::Boundary;
use crate::num::{cdf_f64, GaussHermite};
use crate::scalar::Scalar;

pub const DEFAULT_QUAD_NODES: usize = 64;
pub const MIN_QUAD_NODES: usize = 16;
/// Largest change under node doubling for a bound to count as converged.
pub const STABILITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCase {
    Exchangeable,
    Independent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlepianBound<T> {
    pub k: usize,
    pub s_max: T,
    /// Largest correlation over lags `1..k`; zero when `k == 1`.
    pub rho_max: T,
    pub value: T,
    pub case: BoundCase,
    /// Set when doubling the quadrature nodes moved the value by
    /// [`STABILITY_TOL`] or more.
    pub unstable: bool,
}

/// Orthant probability of `k` exchangeable standard normals with common
/// correlation `rho` in `[0, 1)`, all thresholds equal to `s`.
pub fn exchangeable_orthant<T: Scalar>(s: T, rho: T, k: usize, quad: &GaussHermite<T>) -> T {
    let (s, rho) = (s.as_f64(), rho.as_f64());
    let a = rho.sqrt();
    let b = (1.0 - rho).sqrt();
    let k = k as i32;
    T::lit(
        quad.nodes()
            .iter()
            .zip(quad.weights())
            .map(|(&z, &w)| w.as_f64() * cdf_f64((s + a * z.as_f64()) / b).powi(k))
            .sum(),
    )
}

struct Rules<T> {
    base: GaussHermite<T>,
    doubled: GaussHermite<T>,
}

impl<T: Scalar> Rules<T> {
    fn new(quad_nodes: usize) -> Result<Self> {
        if quad_nodes < MIN_QUAD_NODES {
            return Err(Error::Parameter(format!(
                "Slepian bound needs at least {MIN_QUAD_NODES} quadrature nodes, got {quad_nodes}"
            )));
        }
        Ok(Self {
            base: GaussHermite::new(quad_nodes)?,
            doubled: GaussHermite::new(2 * quad_nodes)?,
        })
    }

    fn bound(
        &self,
        cov: &CovarianceSequence<T>,
        boundary: &Boundary<T>,
        k: usize,
    ) -> Result<SlepianBound<T>> {
        if k == 0 {
            return Err(Error::Parameter(
                "bound dimension must be at least 1".into(),
            ));
        }
        if cov.max_lag() + 1 < k {
            return Err(Error::Shape(format!(
                "dimension {k} needs lags up to {}, sequence stops at lag {}",
                k - 1,
                cov.max_lag()
            )));
        }
        let s_max = boundary.sup_over(k);
        let rho_max = cov.max_correlation(k - 1);
        match rho_max {
            Some(r) if r >= T::one() => Err(Error::DegenerateCorrelation(r.as_f64())),
            Some(r) if r > T::zero() => {
                let value = exchangeable_orthant(s_max, r, k, &self.base);
                let check = exchangeable_orthant(s_max, r, k, &self.doubled);
                Ok(SlepianBound {
                    k,
                    s_max,
                    rho_max: r,
                    value,
                    case: BoundCase::Exchangeable,
                    unstable: (value - check).abs().as_f64() >= STABILITY_TOL,
                })
            }
            _ => Ok(SlepianBound {
                k,
                s_max,
                rho_max: rho_max.unwrap_or_else(T::zero),
                value: T::lit(cdf_f64(s_max.as_f64()).powi(k as i32)),
                case: BoundCase::Independent,
                unstable: false,
            }),
        }
    }
}

pub fn slepian_bound<T: Scalar>(
    cov: &CovarianceSequence<T>,
    boundary: &Boundary<T>,
    k: usize,
    quad_nodes: usize,
) -> Result<SlepianBound<T>> {
    let cov = if cov.max_lag() + 1 < k {
        cov.with_max_lag(k.saturating_sub(1))?
    } else {
        cov.clone()
    };
    Rules::new(quad_nodes)?.bound(&cov, boundary, k)
}

/// Bounds for every `k = 1..=k_max`.
pub fn slepian_bounds<T: Scalar>(
    cov: &CovarianceSequence<T>,
    boundary: &Boundary<T>,
    k_max: usize,
    quad_nodes: usize,
) -> Result<Vec<SlepianBound<T>>> {
    let cov = if cov.max_lag() + 1 < k_max {
        cov.with_max_lag(k_max.saturating_sub(1))?
    } else {
        cov.clone()
    };
    let rules = Rules::new(quad_nodes)?;
    (1..=k_max)
        .map(|k| rules.bound(&cov, boundary, k))
        .collect()
}

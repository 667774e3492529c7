use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

// Acklam's rational approximation, refined below by one Halley step.
const A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_69e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];
const P_LOW: f64 = 0.024_25;

#[inline]
pub(crate) fn cdf_f64(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Inverse CDF for `p` strictly inside (0, 1); callers guarantee the domain.
pub(crate) fn quantile_f64(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if x.abs() > 40.0 {
        return x;
    }
    // Halley step on Φ(x) - p; the tail is evaluated from the side with
    // the small probability so the residual keeps relative accuracy.
    let e = if x < 0.0 {
        cdf_f64(x) - p
    } else {
        (1.0 - p) - cdf_f64(-x)
    };
    // exp(x^2/2) is split in two so it stays finite in the far tail
    let half = (0.25 * x * x).exp();
    let u = e * (2.0 * PI).sqrt() * half * half;
    x - u / (1.0 + 0.5 * x * u)
}

pub fn normal_pdf<T: Scalar>(x: T) -> T {
    let x = x.as_f64();
    T::lit(INV_SQRT_2PI * (-0.5 * x * x).exp())
}

pub fn normal_cdf<T: Scalar>(x: T) -> T {
    T::lit(cdf_f64(x.as_f64()))
}

pub fn normal_quantile<T: Scalar>(p: T) -> Result<T> {
    let p = p.as_f64();
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "normal quantile needs 0 < p < 1, got {p}"
        )));
    }
    Ok(T::lit(quantile_f64(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use orthant_oracle as oracle;

    #[test]
    fn pdf_reference_values() {
        assert_eq!(normal_pdf(0.0f64), 0.398_942_280_401_432_7);
        assert!((normal_pdf(1.0f64) - 0.241_970_724_519_143_37).abs() < 1e-16);
        assert_eq!(normal_pdf(-1.0f64), normal_pdf(1.0f64));
    }

    #[test]
    fn cdf_reference_values() {
        assert_eq!(normal_cdf(0.0f64), 0.5);
        assert!((normal_cdf(1.0f64) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert_eq!(normal_cdf(f64::NEG_INFINITY), 0.0);
        assert_eq!(normal_cdf(f64::INFINITY), 1.0);
    }

    #[test]
    fn cdf_matches_series_oracle() {
        let mut x = -9.0;
        while x <= 9.0 {
            let err = (normal_cdf(x) - oracle::normal_cdf(x)).abs();
            assert!(err <= 1e-12, "x = {x}: err {err:e}");
            x += 0.01;
        }
    }

    #[test]
    fn cdf_reflection() {
        for i in -800..=800 {
            let x = i as f64 / 100.0;
            assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn quantile_reference_values() {
        assert_eq!(normal_quantile(0.5f64).unwrap(), 0.0);
        assert!((normal_quantile(0.841_344_746_068_542_9f64).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(normal_quantile(1.0f64), Err(Error::Domain(_))));
        assert!(matches!(normal_quantile(0.0f64), Err(Error::Domain(_))));
        assert!(normal_quantile(f64::NAN).is_err());
    }

    #[test]
    fn quantile_inverts_cdf_on_grid() {
        // Past x ~ 5.4 one ulp of p near 1 already moves x by more than
        // 1e-9, so the tolerance widens to the representation limit there.
        for i in -600..=600 {
            let x = i as f64 / 100.0;
            let back = normal_quantile(normal_cdf(x)).unwrap();
            let tol = 1e-9f64.max(2.0 * f64::EPSILON / normal_pdf(x));
            assert!((back - x).abs() <= tol, "x = {x}, got {back}");
            if x <= 5.0 {
                assert!((back - x).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn cdf_of_quantile_is_identity_across_tails() {
        for e in 1..=307 {
            let p = 10f64.powi(-e);
            let x = normal_quantile(p).unwrap();
            assert!((normal_cdf(x) - p).abs() <= 1e-9 * p, "p = {p:e}");
        }
        for e in 1..=15 {
            let p = 1.0 - 10f64.powi(-e);
            let x = normal_quantile(p).unwrap();
            assert!((normal_cdf(x) - p).abs() <= 1e-10, "p = {p}");
        }
        let mut prev = f64::NEG_INFINITY;
        for i in 1..1000 {
            let q = normal_quantile(i as f64 / 1000.0).unwrap();
            assert!((normal_cdf(q) - i as f64 / 1000.0).abs() <= 1e-10);
            assert!(q > prev);
            prev = q;
        }
    }

    #[test]
    fn f32_instantiation() {
        let p: f32 = normal_cdf(1.0f32);
        assert!((p - 0.841_344_7).abs() < 1e-6);
        assert!((normal_quantile(p).unwrap() - 1.0).abs() < 1e-5);
    }
}

//! Reference computations for the test suites.
//!
//! Everything here is written independently of `orthant-core`: slow, direct
//! and easy to audit. None of it is meant for production use.

use std::f64::consts::{PI, SQRT_2};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Integration cut-off for Gaussian-weighted integrals; φ(12) < 1e-31.
pub const GAUSS_CUTOFF: f64 = 12.0;

pub fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal CDF from the all-positive erf series in the body and the
/// Laplace continued fraction in the tails.
pub fn normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    let a = x.abs();
    if a <= 5.0 {
        let z = a / SQRT_2;
        // erf(z) = 2/sqrt(pi) e^{-z^2} sum 2^n z^{2n+1} / (2n+1)!!
        let mut term = z;
        let mut sum = z;
        let z2 = z * z;
        let mut n = 0u32;
        while term > 1e-20 * sum {
            n += 1;
            term *= 2.0 * z2 / (2.0 * n as f64 + 1.0);
            sum += term;
            if n > 500 {
                break;
            }
        }
        let erf = 2.0 / PI.sqrt() * (-z2).exp() * sum;
        if x >= 0.0 {
            0.5 + 0.5 * erf
        } else {
            0.5 - 0.5 * erf
        }
    } else {
        let tail = upper_tail_cf(a);
        if x >= 0.0 {
            1.0 - tail
        } else {
            tail
        }
    }
}

/// Q(x) = 1 - Φ(x) for x > 0 via the continued fraction
/// φ(x) / (x + 1/(x + 2/(x + 3/(x + ...)))), evaluated bottom-up.
fn upper_tail_cf(x: f64) -> f64 {
    let mut frac = 0.0;
    for n in (1..=200).rev() {
        frac = n as f64 / (x + frac);
    }
    normal_pdf(x) / (x + frac)
}

/// Recursive adaptive Gauss–Kronrod (7/15) quadrature on [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (val, err) = gk15(f, a, b);
    refine(f, a, b, val, err, tol, 0)
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    val: f64,
    err: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    if err <= tol || depth >= 60 {
        return val;
    }
    let m = 0.5 * (a + b);
    let (lv, le) = gk15(f, a, m);
    let (rv, re) = gk15(f, m, b);
    refine(f, a, m, lv, le, 0.5 * tol, depth + 1) + refine(f, m, b, rv, re, 0.5 * tol, depth + 1)
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    const XK: [f64; 8] = [
        0.991_455_371_120_812_6,
        0.949_107_912_342_758_5,
        0.864_864_423_359_769_1,
        0.741_531_185_599_394_4,
        0.586_087_235_467_691_1,
        0.405_845_151_377_397_2,
        0.207_784_955_007_898_5,
        0.0,
    ];
    const WK: [f64; 8] = [
        0.022_935_322_010_529_22,
        0.063_092_092_629_978_55,
        0.104_790_010_322_250_2,
        0.140_653_259_715_525_9,
        0.169_004_726_639_267_9,
        0.190_350_578_064_785_4,
        0.204_432_940_075_298_9,
        0.209_482_141_084_728,
    ];
    const WG: [f64; 4] = [
        0.129_484_966_168_869_7,
        0.279_705_391_489_276_7,
        0.381_830_050_505_118_9,
        0.417_959_183_673_469_4,
    ];
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// ∫ f(z) φ(z) dz over the real line.
pub fn gaussian_expectation<F: Fn(f64) -> f64>(f: &F, tol: f64) -> f64 {
    integrate(&|z| f(z) * normal_pdf(z), -GAUSS_CUTOFF, GAUSS_CUTOFF, tol)
}

/// P(X1 < s1, X2 < s2) for standard normals with correlation `rho`.
pub fn bivariate_orthant(s1: f64, s2: f64, rho: f64, tol: f64) -> f64 {
    if s1 <= -GAUSS_CUTOFF {
        return 0.0;
    }
    let sd = (1.0 - rho * rho).sqrt();
    let upper = s1.min(GAUSS_CUTOFF);
    integrate(
        &|z| normal_pdf(z) * normal_cdf((s2 - rho * z) / sd),
        -GAUSS_CUTOFF,
        upper,
        tol,
    )
}

/// P(X_i < s_i, i = 1..3) for a zero-mean normal with unit-variance covariance
/// `sigma`, by conditioning on the coordinate `pivot` and integrating the
/// conditional bivariate orthant (itself a 1-D adaptive integral).
pub fn trivariate_orthant(s: [f64; 3], sigma: [[f64; 3]; 3], pivot: usize, tol: f64) -> f64 {
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let (i, j) = (others[0], others[1]);
    let var_i = sigma[i][i] - sigma[i][pivot] * sigma[i][pivot];
    let var_j = sigma[j][j] - sigma[j][pivot] * sigma[j][pivot];
    let cov_ij = sigma[i][j] - sigma[i][pivot] * sigma[j][pivot];
    let (sd_i, sd_j) = (var_i.sqrt(), var_j.sqrt());
    let r = cov_ij / (sd_i * sd_j);
    let upper = s[pivot].min(GAUSS_CUTOFF);
    integrate(
        &|x| {
            let ti = (s[i] - sigma[i][pivot] * x) / sd_i;
            let tj = (s[j] - sigma[j][pivot] * x) / sd_j;
            normal_pdf(x) * bivariate_orthant(ti, tj, r, tol * 1e-2)
        },
        -GAUSS_CUTOFF,
        upper,
        tol,
    )
}

/// Orthant probability of an exchangeable normal vector with common
/// correlation `rho`, by adaptive integration of the one-factor representation.
pub fn exchangeable_orthant(s: f64, rho: f64, k: u32, tol: f64) -> f64 {
    let a = rho.sqrt();
    let b = (1.0 - rho).sqrt();
    gaussian_expectation(&|z| normal_cdf((s + a * z) / b).powi(k as i32), tol)
}

/// O(L^2) DFT with kernel exp(sign * 2πi jn/L); no normalization.
pub fn dft(x: &[(f64, f64)], sign: f64) -> Vec<(f64, f64)> {
    let l = x.len();
    (0..l)
        .map(|n| {
            let mut re = 0.0;
            let mut im = 0.0;
            for (j, &(xr, xi)) in x.iter().enumerate() {
                let ang = sign * 2.0 * PI * ((j * n) % l) as f64 / l as f64;
                let (s, c) = ang.sin_cos();
                re += xr * c - xi * s;
                im += xr * s + xi * c;
            }
            (re, im)
        })
        .collect()
}

/// ARFIMA(0,d,0) lag-k correlation as the ratio of two explicit products.
pub fn arfima_rho(d: f64, k: u32) -> f64 {
    let mut num = 1.0;
    let mut den = 1.0;
    for j in 1..=k {
        num *= d + j as f64 - 1.0;
        den *= j as f64 - d;
    }
    num / den
}

/// Determinant by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn determinant(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for cc in c..n {
                a[r][cc] -= f * a[c][cc];
            }
        }
    }
    det
}

/// Sylvester's criterion: every leading principal minor positive.
pub fn is_positive_definite(m: &[Vec<f64>]) -> bool {
    (1..=m.len()).all(|k| {
        let sub: Vec<Vec<f64>> = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        determinant(&sub) > 0.0
    })
}

/// Kolmogorov–Smirnov statistic of a sample against U(0,1).
pub fn ks_uniform(sample: &[f64]) -> f64 {
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let lo = x - i as f64 / n;
            let hi = (i as f64 + 1.0) / n - x;
            lo.max(hi)
        })
        .fold(0.0, f64::max)
}

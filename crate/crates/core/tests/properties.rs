use orthant::bounds::{exchangeable_orthant, slepian_bound};
use orthant::fpt::{estimate_orthant_fpt, first_crossing};
use orthant::mvn_ref::{genz_estimate, ghk_estimate};
use orthant::num::GaussHermite;
use orthant::{
    Boundary, CovarianceSequence, OrthantProblem, RandomStream, SamplingMethod, SurvivalCurve,
};
use orthant_oracle as oracle;
use proptest::prelude::*;

fn run(d: f64, boundary: Boundary, k: usize, n: usize, seed: u64) -> SurvivalCurve {
    let problem =
        OrthantProblem::new(CovarianceSequence::arfima(d, k - 1).unwrap(), boundary, k).unwrap();
    estimate_orthant_fpt(
        &problem,
        n,
        &RandomStream::new(seed, 0),
        SamplingMethod::Auto,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn survival_curve_structure(d in -0.45f64..0.45, c in -1.0f64..2.5, k in 2usize..40, seed in any::<u64>()) {
        let curve = run(d, Boundary::Constant(c), k, 2000, seed);
        prop_assert!(curve.survival().windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(curve.survival().iter().all(|&p| (0.0..=1.0).contains(&p)));
        let n = curve.n_paths();
        let mut surviving = n;
        for t in 1..=k {
            surviving -= curve.crossings_at(t);
            prop_assert_eq!(curve.p_hat(t), surviving as f64 / n as f64);
        }
        prop_assert_eq!(surviving, curve.censored());
    }

    #[test]
    fn first_crossing_is_first(path in prop::collection::vec(-3.0f64..3.0, 1..30), a in -1.0f64..2.0, b in -0.05f64..0.05) {
        let boundary = Boundary::Linear { intercept: a, slope: b };
        match first_crossing(&path, &boundary) {
            Some(t) => {
                prop_assert!(path[t - 1] >= boundary.at(t));
                prop_assert!((1..t).all(|s| path[s - 1] < boundary.at(s)));
            }
            None => prop_assert!((1..=path.len()).all(|s| path[s - 1] < boundary.at(s))),
        }
    }

    #[test]
    fn exchangeable_bound_decreases_in_k(s in -1.0f64..2.5, rho in 0.01f64..0.9) {
        let q = GaussHermite::new(64).unwrap();
        let values: Vec<f64> = (1..30).map(|k| exchangeable_orthant(s, rho, k, &q)).collect();
        prop_assert!(values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn ghk_weights_stay_in_unit_interval(d in 0.0f64..0.45, c in -1.0f64..2.0, k in 2usize..12) {
        let p = OrthantProblem::new(CovarianceSequence::arfima(d, k).unwrap(), Boundary::Constant(c), k).unwrap();
        let r = ghk_estimate(&p.thresholds(), &p.cholesky(k).unwrap(), 500, &RandomStream::new(1, 0)).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.estimate));
        prop_assert!(r.stderr >= 0.0);
    }
}

#[test]
fn white_noise_matches_product_at_every_horizon() {
    // Σ = I with a non-constant boundary: P_k = prod_{t<=k} Φ(S_t)
    let boundary = Boundary::Linear {
        intercept: 1.5,
        slope: 0.02,
    };
    let n = 100_000;
    let curve = run(0.0, boundary.clone(), 32, n, 11);
    let mut exact = 1.0;
    for k in 1..=32 {
        exact *= oracle::normal_cdf(boundary.at(k));
        let sd = (exact * (1.0 - exact) / n as f64).sqrt();
        assert!(
            (curve.p_hat(k) - exact).abs() <= 3.0 * sd,
            "k={k}: {} vs {exact}",
            curve.p_hat(k)
        );
    }
}

#[test]
fn two_point_arfima_matches_bivariate_quadrature() {
    for &(d, s) in &[(0.2, 1.0), (0.35, 0.0), (-0.3, 0.5)] {
        let rho = d / (1.0 - d);
        let exact = oracle::bivariate_orthant(s, s, rho, 1e-12);
        let n = 100_000;
        let curve = run(d, Boundary::Constant(s), 2, n, 12);
        let sd = (exact * (1.0 - exact) / n as f64).sqrt();
        assert!(
            (curve.p_hat(2) - exact).abs() <= 3.0 * sd,
            "d={d}: {} vs {exact}",
            curve.p_hat(2)
        );
    }
}

#[test]
fn samplers_agree_on_the_survival_curve() {
    let p = OrthantProblem::new(
        CovarianceSequence::arfima(0.3, 24).unwrap(),
        Boundary::Constant(1.2),
        25,
    )
    .unwrap();
    let n = 100_000;
    let dh = estimate_orthant_fpt(
        &p,
        n,
        &RandomStream::new(13, 0),
        SamplingMethod::DaviesHarte,
    )
    .unwrap();
    let dl = estimate_orthant_fpt(
        &p,
        n,
        &RandomStream::new(14, 0),
        SamplingMethod::DurbinLevinson,
    )
    .unwrap();
    for k in [1, 5, 10, 25] {
        let sd = dh.stderr(k).hypot(dl.stderr(k));
        assert!((dh.p_hat(k) - dl.p_hat(k)).abs() <= 3.0 * sd, "k={k}");
    }
}

#[test]
fn reference_methods_agree_with_fpt() {
    let k = 10;
    let p = OrthantProblem::new(
        CovarianceSequence::arfima(0.25, k - 1).unwrap(),
        Boundary::Linear {
            intercept: 1.5,
            slope: -0.02,
        },
        k,
    )
    .unwrap();
    let chol = p.cholesky(k).unwrap();
    let curve =
        estimate_orthant_fpt(&p, 100_000, &RandomStream::new(15, 0), SamplingMethod::Auto).unwrap();
    let g = genz_estimate(
        &p.thresholds(),
        &chol,
        1e-4,
        200_000,
        &RandomStream::new(16, 0),
    )
    .unwrap();
    let h = ghk_estimate(&p.thresholds(), &chol, 100_000, &RandomStream::new(17, 0)).unwrap();
    let sd_g = g.error_99 / orthant::fpt::Z_99;
    assert!((curve.p_hat(k) - g.estimate).abs() <= 3.0 * curve.stderr(k).hypot(sd_g));
    assert!((h.estimate - g.estimate).abs() <= 3.0 * h.stderr.hypot(sd_g));
    let bound = slepian_bound(p.cov(), p.boundary(), k, 64).unwrap();
    assert!(g.estimate <= bound.value);
}

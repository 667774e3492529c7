use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Gauss–Hermite rule rescaled to the standard normal weight, so that
/// `integrate(f)` approximates E[f(Z)] for Z ~ N(0, 1).
#[derive(Debug, Clone)]
pub struct GaussHermite<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> GaussHermite<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!(
                "Gauss-Hermite needs at least 2 nodes, got {n}"
            )));
        }
        let (x, w) = physicists_rule(n);
        let nodes = x
            .iter()
            .map(|&xi| T::lit(xi * std::f64::consts::SQRT_2))
            .collect();
        let weights = w.iter().map(|&wi| T::lit(wi / PI.sqrt())).collect();
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(z))
            .sum()
    }
}

pub fn gauss_hermite_integrate<T: Scalar, F: FnMut(T) -> T>(f: F, nodes: usize) -> Result<T> {
    Ok(GaussHermite::new(nodes)?.integrate(f))
}

/// Nodes and weights for the weight exp(-x^2) by Newton iteration on the
/// orthonormal Hermite recurrence.
fn physicists_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    const PIM4: f64 = 0.751_125_544_464_942_5; // pi^(-1/4)
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z = 0.0;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.855_75 * (2.0 * nf + 1.0).powf(-0.166_67),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = PIM4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::normal_cdf;
    use orthant_oracle as oracle;

    #[test]
    fn rejects_too_few_nodes() {
        assert!(matches!(
            gauss_hermite_integrate(|_: f64| 1.0, 1),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn normal_moments_are_exact() {
        for &n in &[2usize, 5, 16, 64, 128] {
            let q = GaussHermite::<f64>::new(n).unwrap();
            assert!((q.integrate(|_| 1.0) - 1.0).abs() < 1e-13);
            assert!((q.integrate(|z| z * z) - 1.0).abs() < 1e-12);
            assert!(q.integrate(|z| z).abs() < 1e-13);
        }
    }

    #[test]
    fn polynomial_exactness_up_to_degree_2n_minus_1() {
        // E[Z^(2m)] = (2m-1)!!
        let n = 8;
        let q = GaussHermite::<f64>::new(n).unwrap();
        let mut dfact = 1.0;
        for m in 1..n {
            dfact *= (2 * m - 1) as f64;
            let got = q.integrate(|z| z.powi(2 * m as i32));
            assert!(
                (got - dfact).abs() <= 1e-11 * dfact,
                "m = {m}: {got} vs {dfact}"
            );
            assert!(q.integrate(|z| z.powi(2 * m as i32 + 1)).abs() < 1e-9 * dfact);
        }
    }

    #[test]
    fn cube_of_cdf_matches_adaptive_oracle() {
        let got = gauss_hermite_integrate(|z: f64| normal_cdf(z).powi(3), 64).unwrap();
        let want = oracle::gaussian_expectation(&|z| oracle::normal_cdf(z).powi(3), 1e-14);
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        // E[Φ(Z)^3] = 1/4 for the uniform Φ(Z)
        assert!((want - 0.25).abs() < 1e-12);
    }
}

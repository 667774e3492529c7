use std::f64::consts::PI;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `Forward` applies the kernel exp(+2πi jn/L) without scaling; `Inverse`
/// uses exp(-2πi jn/L) and divides by L.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

fn check_len(len: usize) -> Result<()> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::Shape(format!(
            "FFT length must be a power of two >= 2, got {len}"
        )));
    }
    Ok(())
}

/// A complex sequence whose length is a power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSequence<T> {
    values: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexSequence<T> {
    pub fn new(values: Vec<Complex<T>>) -> Result<Self> {
        check_len(values.len())?;
        Ok(Self { values })
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&re| Complex::new(re, T::zero()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn fft(&self, direction: Direction) -> Self {
        let mut values = self.values.clone();
        FftPlan::new(values.len())
            .expect("length checked at construction")
            .process(&mut values, direction);
        Self { values }
    }
}

pub fn fft<T: Scalar>(seq: &ComplexSequence<T>, direction: Direction) -> ComplexSequence<T> {
    seq.fft(direction)
}

pub fn fft_in_place<T: Scalar>(data: &mut [Complex<T>], direction: Direction) -> Result<()> {
    FftPlan::new(data.len())?.process(data, direction);
    Ok(())
}

/// Precomputed twiddles and bit-reversal table for one transform length.
#[derive(Debug, Clone)]
pub struct FftPlan<T> {
    len: usize,
    twiddles: Vec<Complex<T>>,
    bitrev: Vec<usize>,
}

impl<T: Scalar> FftPlan<T> {
    pub fn new(len: usize) -> Result<Self> {
        check_len(len)?;
        let twiddles = (0..len / 2)
            .map(|j| {
                let (s, c) = (2.0 * PI * j as f64 / len as f64).sin_cos();
                Complex::new(T::lit(c), T::lit(s))
            })
            .collect();
        let bits = len.trailing_zeros();
        let bitrev = (0..len)
            .map(|i| i.reverse_bits() >> (usize::BITS - bits))
            .collect();
        Ok(Self {
            len,
            twiddles,
            bitrev,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Iterative radix-2 decimation in time.
    pub fn process(&self, data: &mut [Complex<T>], direction: Direction) {
        assert_eq!(data.len(), self.len, "buffer length does not match plan");
        for (i, &j) in self.bitrev.iter().enumerate() {
            if i < j {
                data.swap(i, j);
            }
        }
        let inverse = direction == Direction::Inverse;
        let mut half = 1;
        while half < self.len {
            let stride = self.len / (2 * half);
            for start in (0..self.len).step_by(2 * half) {
                for j in 0..half {
                    let mut w = self.twiddles[j * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let t = data[start + j + half] * w;
                    let u = data[start + j];
                    data[start + j] = u + t;
                    data[start + j + half] = u - t;
                }
            }
            half *= 2;
        }
        if inverse {
            let scale = T::one() / T::from_count(self.len);
            for v in data.iter_mut() {
                *v *= scale;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::RandomStream;
    use orthant_oracle as oracle;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn delta_and_constant() {
        let delta = ComplexSequence::new(vec![c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        for v in fft(&delta, Direction::Forward).values() {
            assert_eq!(*v, c(1.0));
        }
        let ones = ComplexSequence::new(vec![c(1.0); 4]).unwrap();
        let out = fft(&ones, Direction::Forward);
        assert_eq!(out.values()[0], c(4.0));
        for v in &out.values()[1..] {
            assert!(v.norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(matches!(
            ComplexSequence::<f64>::new(vec![c(1.0); 6]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            ComplexSequence::<f64>::new(vec![c(1.0)]),
            Err(Error::Shape(_))
        ));
        assert!(FftPlan::<f64>::new(0).is_err());
        let mut buf = vec![c(0.0); 12];
        assert!(fft_in_place(&mut buf, Direction::Forward).is_err());
    }

    #[test]
    fn matches_direct_dft_and_round_trips() {
        let mut rng = RandomStream::new(11, 0);
        for &len in &[2usize, 8, 64] {
            let raw: Vec<(f64, f64)> = (0..len)
                .map(|_| (rng.next_standard_normal(), rng.next_standard_normal()))
                .collect();
            let seq = ComplexSequence::new(raw.iter().map(|&(a, b)| Complex::new(a, b)).collect())
                .unwrap();
            let fwd = fft(&seq, Direction::Forward);
            let expected = oracle::dft(&raw, 1.0);
            for (got, want) in fwd.values().iter().zip(&expected) {
                assert!((got.re - want.0).abs() < 1e-10 && (got.im - want.1).abs() < 1e-10);
            }
            let inv = fft(&seq, Direction::Inverse);
            let expected = oracle::dft(&raw, -1.0);
            for (got, want) in inv.values().iter().zip(&expected) {
                assert!((got.re - want.0 / len as f64).abs() < 1e-10);
                assert!((got.im - want.1 / len as f64).abs() < 1e-10);
            }
            let back = fft(&fwd, Direction::Inverse);
            for (a, b) in back.values().iter().zip(seq.values()) {
                assert!((a - b).norm() <= 1e-10 * b.norm().max(1.0));
            }
        }
    }

    #[test]
    fn even_real_input_has_real_transform() {
        let len = 32;
        let mut x = vec![0.0; len];
        for j in 0..=len / 2 {
            let v = 1.0 / (1.0 + j as f64);
            x[j] = v;
            x[(len - j) % len] = v;
        }
        let out = fft(&ComplexSequence::from_real(&x).unwrap(), Direction::Forward);
        for v in out.values() {
            assert!(v.im.abs() <= 1e-10);
        }
    }

    #[test]
    fn f32_round_trip() {
        let x: Vec<f32> = (0..16).map(|i| (i as f32 * 0.37).sin()).collect();
        let seq = ComplexSequence::from_real(&x).unwrap();
        let back = seq.fft(Direction::Forward).fft(Direction::Inverse);
        for (a, b) in back.values().iter().zip(seq.values()) {
            assert!((a - b).norm() < 1e-5);
        }
    }
}

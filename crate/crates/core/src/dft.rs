//! Fixed-order discrete Fourier transforms.
//!
//! The finite model uses a direct O(N^2) transform over a precomputed table
//! of N-th roots of unity, so results are bit-reproducible for a given N.
//! The sampled continuum uses an iterative radix-2 FFT on power-of-two grids.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

/// Table of the N-th roots of unity, `table[k] = exp(2 pi i k / N)`.
#[derive(Debug, Clone)]
pub(crate) struct Roots {
    table: Vec<Complex64>,
}

impl Roots {
    pub(crate) fn new(n: usize) -> Self {
        let table = (0..n)
            .map(|k| {
                let theta = 2.0 * PI * k as f64 / n as f64;
                Complex64::new(libm::cos(theta), libm::sin(theta))
            })
            .collect();
        Self { table }
    }

    /// `exp(2 pi i k / N)` for any residue `k`.
    #[inline]
    pub(crate) fn pow(&self, k: usize) -> Complex64 {
        self.table[k % self.table.len()]
    }

    /// `exp(-2 pi i k / N)`.
    #[inline]
    pub(crate) fn pow_neg(&self, k: usize) -> Complex64 {
        let n = self.table.len();
        self.table[(n - k % n) % n]
    }
}

/// `out[k] = sum_t input[t] exp(-2 pi i k t / N)`.
pub(crate) fn dft_forward(input: &[Complex64], roots: &Roots) -> Vec<Complex64> {
    let n = input.len();
    (0..n)
        .map(|k| {
            input
                .iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (t, v)| acc + v * roots.pow_neg(k * t % n))
        })
        .collect()
}

/// `out[k] = sum_t input[t] exp(+2 pi i k t / N)` (no 1/N factor).
pub(crate) fn dft_backward(input: &[Complex64], roots: &Roots) -> Vec<Complex64> {
    let n = input.len();
    (0..n)
        .map(|k| {
            input
                .iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (t, v)| acc + v * roots.pow(k * t % n))
        })
        .collect()
}

/// In-place radix-2 FFT, `x[k] <- sum_t x[t] exp(-2 pi i k t / n)`.
///
/// `x.len()` must be a power of two.
pub(crate) fn fft_forward(x: &mut [Complex64]) {
    let n = x.len();
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            x.swap(i, j);
        }
    }
    let twiddles: Vec<Complex64> = (0..n / 2)
        .map(|k| {
            let theta = -2.0 * PI * k as f64 / n as f64;
            Complex64::new(libm::cos(theta), libm::sin(theta))
        })
        .collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let a = x[start + k];
                let b = x[start + k + half] * w;
                x[start + k] = a + b;
                x[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Two-dimensional forward FFT on a row-major `rows x cols` buffer.
pub(crate) fn fft2_forward(x: &mut [Complex64], rows: usize, cols: usize) {
    for r in 0..rows {
        fft_forward(&mut x[r * cols..(r + 1) * cols]);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = x[r * cols + c];
        }
        fft_forward(&mut column);
        for r in 0..rows {
            x[r * cols + c] = column[r];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(input: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = input.len();
        (0..n)
            .map(|k| {
                input.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (t, v)| {
                    let theta = sign * 2.0 * PI * (k * t) as f64 / n as f64;
                    acc + v * Complex64::new(theta.cos(), theta.sin())
                })
            })
            .collect()
    }

    fn sample(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|t| Complex64::new((t as f64 * 0.7).sin(), (t as f64 * 1.3).cos() - 0.2))
            .collect()
    }

    #[test]
    fn direct_dft_matches_naive_sum() {
        for n in [3, 5, 9, 15] {
            let x = sample(n);
            let roots = Roots::new(n);
            for (a, b) in dft_forward(&x, &roots).iter().zip(naive(&x, -1.0)) {
                assert!((a - b).norm() < 1e-12);
            }
            for (a, b) in dft_backward(&x, &roots).iter().zip(naive(&x, 1.0)) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn radix2_fft_matches_naive_sum() {
        for n in [1, 2, 16, 64, 256] {
            let x = sample(n);
            let mut y = x.clone();
            fft_forward(&mut y);
            for (a, b) in y.iter().zip(naive(&x, -1.0)) {
                assert!((a - b).norm() < 1e-9, "n={n}");
            }
        }
    }

    #[test]
    fn fft2_is_separable() {
        let (rows, cols) = (4, 8);
        let x = sample(rows * cols);
        let mut y = x.clone();
        fft2_forward(&mut y, rows, cols);
        let expect = |kr: usize, kc: usize| {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..rows {
                for c in 0..cols {
                    let theta = -2.0 * PI * ((kr * r) as f64 / rows as f64 + (kc * c) as f64 / cols as f64);
                    acc += x[r * cols + c] * Complex64::new(theta.cos(), theta.sin());
                }
            }
            acc
        };
        for kr in 0..rows {
            for kc in 0..cols {
                assert!((y[kr * cols + kc] - expect(kr, kc)).norm() < 1e-10);
            }
        }
    }
}

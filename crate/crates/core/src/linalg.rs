//! Dense SVD and rank helpers backed by nalgebra.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Singular values of a row-major `rows x cols` matrix, sorted descending.
pub fn singular_values(entries: &[Complex64], rows: usize, cols: usize) -> Vec<f64> {
    debug_assert_eq!(entries.len(), rows * cols);
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_row_slice(rows, cols, entries);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `rel_tol * s_max`; zero for the zero matrix.
pub fn numerical_rank(singular_values: &[f64], rel_tol: f64) -> usize {
    let max = singular_values.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    singular_values.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Rank of a row-major matrix at relative tolerance `rel_tol`.
pub fn matrix_rank(entries: &[Complex64], rows: usize, cols: usize, rel_tol: f64) -> usize {
    numerical_rank(&singular_values(entries, rows, cols), rel_tol)
}

/// Principal square root of a Hermitian positive semidefinite matrix (row-major).
///
/// Negative eigenvalues from round-off are clamped to zero.
pub(crate) fn hermitian_sqrt(entries: &[Complex64], n: usize) -> Vec<Complex64> {
    let m = DMatrix::from_row_slice(n, n, entries);
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = m.symmetric_eigen();
    let roots = eig.eigenvalues.map(|l| Complex64::new(libm::sqrt(l.max(0.0)), 0.0));
    let v = &eig.eigenvectors;
    let r = v * DMatrix::from_diagonal(&roots) * v.adjoint();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(r[(i, j)]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_values_of_diagonal() {
        let c = |v: f64| Complex64::new(v, 0.0);
        let m = [c(0.0), c(0.0), c(0.0), c(0.0), Complex64::new(0.0, -3.0), c(0.0), c(0.0), c(0.0), c(2.0)];
        let s = singular_values(&m, 3, 3);
        assert!((s[0] - 3.0).abs() < 1e-14 && (s[1] - 2.0).abs() < 1e-14 && s[2].abs() < 1e-14);
        assert_eq!(numerical_rank(&s, 1e-10), 2);
        assert_eq!(numerical_rank(&[0.0, 0.0], 1e-10), 0);
    }

    #[test]
    fn rectangular_rank() {
        let c = |v: f64| Complex64::new(v, 0.0);
        // rows 2 and 3 are multiples of row 1
        let m = [c(1.0), c(2.0), c(3.0), c(2.0), c(4.0), c(6.0)];
        assert_eq!(matrix_rank(&m, 2, 3, 1e-10), 1);
    }

    #[test]
    fn hermitian_sqrt_squares_back() {
        let a = [
            Complex64::new(2.0, 0.0),
            Complex64::new(0.5, 0.5),
            Complex64::new(0.5, -0.5),
            Complex64::new(1.0, 0.0),
        ];
        let r = hermitian_sqrt(&a, 2);
        for i in 0..2 {
            for j in 0..2 {
                let v: Complex64 = (0..2).map(|k| r[i * 2 + k] * r[k * 2 + j]).sum();
                assert!((v - a[i * 2 + j]).norm() < 1e-12);
            }
        }
    }
}

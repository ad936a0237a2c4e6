//! Signals on `Z_N`, dense operators on `l^2(Z_N)`, and the time-frequency
//! machinery acting on them: shifts `pi(z) = M_omega T_x`, parity, the
//! operator translation `alpha_z(A) = pi(z) A pi(z)^*`, traces and Schatten norms.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::dft::Roots;
use crate::error::{Error, Result};
use crate::linalg;
use crate::phase_space::{lp_norm, GroupParams, PhasePoint};

/// Relative cutoff below which singular values count as zero in rank decisions.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Phase `c` in `P pi(z) P = c * pi(-z)`. With `pi(z) = M_omega T_x` the
/// discrete parity conjugation introduces no extra phase.
pub const PARITY_SHIFT_PHASE: Complex64 = Complex64::new(1.0, 0.0);

/// A vector in `l^2(Z_N)` with the plain counting inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    params: GroupParams,
    values: Vec<Complex64>,
}

impl Signal {
    pub fn new(params: GroupParams, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != params.n() {
            return Err(Error::DimensionMismatch {
                expected: params.n(),
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { params, values })
    }

    pub fn zeros(params: GroupParams) -> Self {
        Self {
            params,
            values: vec![Complex64::new(0.0, 0.0); params.n()],
        }
    }

    /// Standard basis vector `e_k`.
    pub fn basis(params: GroupParams, k: usize) -> Self {
        let mut s = Self::zeros(params);
        s.values[k % params.n()] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn from_fn(params: GroupParams, f: impl Fn(usize) -> Complex64) -> Self {
        Self {
            params,
            values: (0..params.n()).map(f).collect(),
        }
    }

    #[inline]
    pub fn params(&self) -> GroupParams {
        self.params
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `<self, other> = sum_t self(t) conj(other(t))`.
    pub fn inner(&self, other: &Signal) -> Result<Complex64> {
        self.params.check_same(other.params)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum())
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.values.iter().map(|v| v.norm_sqr()).sum())
    }

    pub fn scale(&self, c: Complex64) -> Signal {
        Signal {
            params: self.params,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn conj(&self) -> Signal {
        Signal {
            params: self.params,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Signal) -> Result<f64> {
        self.params.check_same(other.params)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).norm())))
    }
}

impl Add for &Signal {
    type Output = Signal;

    fn add(self, rhs: &Signal) -> Signal {
        assert_eq!(self.params, rhs.params, "signals from different groups");
        Signal {
            params: self.params,
            values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect(),
        }
    }
}

/// `(T_x psi)(t) = psi(t - x)`.
pub fn translate_signal(psi: &Signal, x: i64) -> Signal {
    let n = psi.params.n();
    let shift = psi.params.residue(x);
    Signal::from_fn(psi.params, |t| psi.values[(t + n - shift) % n])
}

/// `(M_omega psi)(t) = exp(2 pi i omega t / N) psi(t)`.
pub fn modulate_signal(psi: &Signal, omega: i64) -> Signal {
    let n = psi.params.n();
    let w = psi.params.residue(omega);
    let roots = Roots::new(n);
    Signal::from_fn(psi.params, |t| psi.values[t] * roots.pow(w * t))
}

/// `pi(z) psi = M_omega T_x psi`.
pub fn tf_shift(psi: &Signal, z: PhasePoint) -> Signal {
    modulate_signal(&translate_signal(psi, z.x() as i64), z.omega() as i64)
}

/// `(P psi)(t) = psi(-t)`.
pub fn parity_signal(psi: &Signal) -> Signal {
    let n = psi.params.n();
    Signal::from_fn(psi.params, |t| psi.values[(n - t) % n])
}

/// A dense `N x N` complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    params: GroupParams,
    entries: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn new(params: GroupParams, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != params.dim() {
            return Err(Error::DimensionMismatch {
                expected: params.dim(),
                found: entries.len(),
            });
        }
        if let Some(i) = entries.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { params, entries })
    }

    pub fn zeros(params: GroupParams) -> Self {
        Self {
            params,
            entries: vec![Complex64::new(0.0, 0.0); params.dim()],
        }
    }

    pub fn identity(params: GroupParams) -> Self {
        Self::from_fn(params, |r, c| if r == c { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn from_fn(params: GroupParams, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let n = params.n();
        Self {
            params,
            entries: (0..n * n).map(|i| f(i / n, i % n)).collect(),
        }
    }

    /// Builds the matrix whose `k`-th column is `column(k)`.
    pub fn from_columns(params: GroupParams, column: impl Fn(usize) -> Signal) -> Self {
        let n = params.n();
        let mut m = Self::zeros(params);
        for c in 0..n {
            let col = column(c);
            for r in 0..n {
                m.entries[r * n + c] = col.values[r];
            }
        }
        m
    }

    #[inline]
    pub fn params(&self) -> GroupParams {
        self.params
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.params.n()
    }

    #[inline]
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.params.n() + col]
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix::from_fn(self.params, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, c: Complex64) -> OperatorMatrix {
        OperatorMatrix {
            params: self.params,
            entries: self.entries.iter().map(|v| v * c).collect(),
        }
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.params.check_same(other.params)?;
        let n = self.n();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] += a * other.entries[k * n + c];
                }
            }
        }
        Ok(OperatorMatrix { params: self.params, entries: out })
    }

    pub fn apply(&self, psi: &Signal) -> Result<Signal> {
        self.params.check_same(psi.params)?;
        let n = self.n();
        Ok(Signal::from_fn(self.params, |r| {
            (0..n).map(|c| self.entries[r * n + c] * psi.values[c]).sum()
        }))
    }

    /// Hilbert-Schmidt inner product `tr(A B^*)`.
    pub fn hs_inner(&self, other: &OperatorMatrix) -> Result<Complex64> {
        self.params.check_same(other.params)?;
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| a * b.conj()).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|v| v.norm_sqr()).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| f64::max(m, v.norm()))
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> Result<f64> {
        self.params.check_same(other.params)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).norm())))
    }

    /// Descending singular values.
    pub fn singular_values(&self) -> Vec<f64> {
        let n = self.n();
        linalg::singular_values(&self.entries, n, n)
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.params, rhs.params, "operators from different groups");
        OperatorMatrix {
            params: self.params,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.params, rhs.params, "operators from different groups");
        OperatorMatrix {
            params: self.params,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.matmul(rhs).expect("operators from different groups")
    }
}

/// Matrix of `pi(z) = M_omega T_x`; entry `(t, t - x)` is `exp(2 pi i omega t / N)`.
pub fn tf_shift_matrix(z: PhasePoint) -> OperatorMatrix {
    let params = z.params();
    let n = params.n();
    let roots = Roots::new(n);
    let mut m = OperatorMatrix::zeros(params);
    for t in 0..n {
        let col = (t + n - z.x()) % n;
        m.entries[t * n + col] = roots.pow(z.omega() * t);
    }
    m
}

/// `P A P`, i.e. entry `(s, t)` becomes `A(-s, -t)`.
pub fn parity_conjugate(a: &OperatorMatrix) -> OperatorMatrix {
    let n = a.n();
    OperatorMatrix::from_fn(a.params, |s, t| a.get((n - s) % n, (n - t) % n))
}

/// `alpha_z(A) = pi(z) A pi(z)^*`; entry `(s, t)` is
/// `exp(2 pi i omega (s - t) / N) A(s - x, t - x)`.
pub fn alpha_shift(a: &OperatorMatrix, z: PhasePoint) -> Result<OperatorMatrix> {
    a.params.check_same(z.params())?;
    let n = a.n();
    let roots = Roots::new(n);
    let (x, w) = (z.x(), z.omega());
    Ok(OperatorMatrix::from_fn(a.params, |s, t| {
        roots.pow(w * ((s + n - t) % n)) * a.get((s + n - x) % n, (t + n - x) % n)
    }))
}

/// `(xi (x) eta)(zeta) = <zeta, eta> xi`; entry `(s, t)` is `xi(s) conj(eta(t))`.
pub fn rank_one(xi: &Signal, eta: &Signal) -> Result<OperatorMatrix> {
    xi.params.check_same(eta.params)?;
    Ok(OperatorMatrix::from_fn(xi.params, |s, t| xi.values[s] * eta.values[t].conj()))
}

pub fn trace(a: &OperatorMatrix) -> Complex64 {
    (0..a.n()).map(|i| a.get(i, i)).sum()
}

/// `tr(A B)` without forming the product.
pub fn trace_product(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<Complex64> {
    a.params.check_same(b.params)?;
    let n = a.n();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a.entries[i * n + j] * b.entries[j * n + i];
        }
    }
    Ok(acc)
}

/// A Schatten exponent `p` in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SchattenNorm {
    pub p: f64,
    pub value: f64,
}

/// Singular values (descending) and the requested Schatten norms.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SchattenReport {
    pub singular_values: Vec<f64>,
    pub norms: Vec<SchattenNorm>,
}

impl SchattenReport {
    /// Norm for exponent `p`, if it was requested.
    pub fn norm(&self, p: f64) -> Option<f64> {
        self.norms.iter().find(|n| n.p == p).map(|n| n.value)
    }

    /// Numerical rank at the default relative tolerance.
    pub fn rank(&self) -> usize {
        linalg::numerical_rank(&self.singular_values, RANK_TOLERANCE)
    }
}

/// `(sum s^p)^{1/p}`, or `max s` for `p = inf`.
pub fn schatten_norm_of(singular_values: &[f64], p: f64) -> Result<f64> {
    let as_complex: Vec<Complex64> = singular_values.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    lp_norm(&as_complex, p, 1.0)
}

pub fn schatten_norm(a: &OperatorMatrix, p: f64) -> Result<f64> {
    schatten_norm_of(&a.singular_values(), p)
}

pub fn schatten_report(a: &OperatorMatrix, ps: &[f64]) -> Result<SchattenReport> {
    if let Some(&bad) = ps.iter().find(|p| p.is_nan() || **p < 1.0) {
        return Err(Error::InvalidExponent(bad));
    }
    let singular_values = a.singular_values();
    let norms = ps
        .iter()
        .map(|&p| schatten_norm_of(&singular_values, p).map(|value| SchattenNorm { p, value }))
        .collect::<Result<Vec<_>>>()?;
    Ok(SchattenReport { singular_values, norms })
}

//! Werner's convolutions between functions and operators on phase space.
//!
//! * `f * S = (1/N) sum_z f(z) alpha_z(S)` is an operator,
//! * `S * T (z) = tr(S alpha_z(T_check))` is a function,
//! * `f * g` is the group convolution on `Z_N x Z_N` with measure `nu`.
//!
//! For a fixed operator `S` the maps `A_S f = f * S` and
//! `B_S T = T * (S_check)^*` are adjoint to each other between `L^2(nu)` and
//! the Hilbert-Schmidt operators; [`ConvMapMatrix`] materializes either one
//! as an `N^2 x N^2` matrix.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dft::Roots;
use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{parity_conjugate, OperatorMatrix};
use crate::phase_space::{GroupParams, PhaseFunction};

/// Largest `N^2` for which a convolution map is materialized.
pub const DEFAULT_CONV_MAP_CAP: usize = 4096;

/// `f * S = (1/N) sum_z f(z) alpha_z(S)`.
pub fn conv_fun_op(f: &PhaseFunction, s: &OperatorMatrix) -> Result<OperatorMatrix> {
    let params = f.params();
    params.check_same(s.params())?;
    let n = params.n();
    let roots = Roots::new(n);
    let mut out = vec![Complex64::new(0.0, 0.0); params.dim()];
    for z in params.points() {
        let w = f[z];
        if w == Complex64::new(0.0, 0.0) {
            continue;
        }
        let w = w / n as f64;
        let (x, omega) = (z.x(), z.omega());
        for r in 0..n {
            let rs = (r + n - x) % n;
            for c in 0..n {
                let cs = (c + n - x) % n;
                out[r * n + c] += w * roots.pow(omega * ((r + n - c) % n)) * s.get(rs, cs);
            }
        }
    }
    OperatorMatrix::new(params, out)
}

/// `(S * T)(z) = tr(S alpha_z(T_check))`.
pub fn conv_op_op(s: &OperatorMatrix, t: &OperatorMatrix) -> Result<PhaseFunction> {
    let params = s.params();
    params.check_same(t.params())?;
    let n = params.n();
    let roots = Roots::new(n);
    let tc = parity_conjugate(t);
    Ok(PhaseFunction::from_fn(params, |z| {
        let (x, omega) = (z.x(), z.omega());
        // tr(S B) = sum_{i,j} S(i,j) B(j,i), B = alpha_z(T_check)
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let b = roots.pow(omega * ((j + n - i) % n)) * tc.get((j + n - x) % n, (i + n - x) % n);
                acc += s.get(i, j) * b;
            }
        }
        acc
    }))
}

/// Group convolution on phase space, `(f * g)(z) = (1/N) sum f(z - z') g(z')`.
pub fn conv_fun_fun(f: &PhaseFunction, g: &PhaseFunction) -> Result<PhaseFunction> {
    f.convolve(g)
}

/// Which of the two convolution maps built from `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum ConvMapKind {
    /// `A_S f = f * S`, functions to operators.
    FunctionToOperator,
    /// `B_S T = T * (S_check)^*`, operators to functions.
    OperatorToFunction,
}

/// Explicit `N^2 x N^2` matrix of a convolution map.
///
/// Functions are vectorized row-major on `(x, omega)`, operators row-major on
/// their entries; column `j` is the image of the `j`-th standard basis element.
#[derive(Debug, Clone)]
pub struct ConvMapMatrix {
    kind: ConvMapKind,
    source: OperatorMatrix,
    matrix: Vec<Complex64>,
}

impl ConvMapMatrix {
    pub fn kind(&self) -> ConvMapKind {
        self.kind
    }

    pub fn source(&self) -> &OperatorMatrix {
        &self.source
    }

    /// Side length `N^2`.
    pub fn dim(&self) -> usize {
        self.source.params().dim()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn apply(&self, input: &[Complex64]) -> Result<Vec<Complex64>> {
        let d = self.dim();
        if input.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: input.len(),
            });
        }
        Ok((0..d)
            .map(|r| self.matrix[r * d..(r + 1) * d].iter().zip(input).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let d = self.dim();
        linalg::singular_values(&self.matrix, d, d)
    }

    pub fn rank(&self, rel_tol: f64) -> usize {
        linalg::numerical_rank(&self.singular_values(), rel_tol)
    }

    pub fn kernel_dim(&self, rel_tol: f64) -> usize {
        self.dim() - self.rank(rel_tol)
    }
}

/// Materializes `A_S` or `B_S` under the default cap.
pub fn build_conv_map(s: &OperatorMatrix, kind: ConvMapKind) -> Result<ConvMapMatrix> {
    build_conv_map_with_cap(s, kind, DEFAULT_CONV_MAP_CAP)
}

pub fn build_conv_map_with_cap(s: &OperatorMatrix, kind: ConvMapKind, cap: usize) -> Result<ConvMapMatrix> {
    let params = s.params();
    let d = params.dim();
    if d > cap {
        return Err(Error::CapExceeded { size: d, cap });
    }
    let mut matrix = vec![Complex64::new(0.0, 0.0); d * d];
    let mut basis = vec![Complex64::new(0.0, 0.0); d];
    for j in 0..d {
        basis[j] = Complex64::new(1.0, 0.0);
        let column = apply_conv_map(s, kind, &basis)?;
        basis[j] = Complex64::new(0.0, 0.0);
        for (i, v) in column.into_iter().enumerate() {
            matrix[i * d + j] = v;
        }
    }
    Ok(ConvMapMatrix {
        kind,
        source: s.clone(),
        matrix,
    })
}

/// Applies `A_S` or `B_S` to a vectorized input without materializing the map.
pub fn apply_conv_map(s: &OperatorMatrix, kind: ConvMapKind, input: &[Complex64]) -> Result<Vec<Complex64>> {
    let params: GroupParams = s.params();
    match kind {
        ConvMapKind::FunctionToOperator => {
            let f = PhaseFunction::new(params, input.to_vec())?;
            Ok(conv_fun_op(&f, s)?.into_entries())
        }
        ConvMapKind::OperatorToFunction => {
            let t = OperatorMatrix::new(params, input.to_vec())?;
            let partner = parity_conjugate(s).adjoint();
            Ok(conv_op_op(&t, &partner)?.into_values())
        }
    }
}

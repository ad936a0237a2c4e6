//! Short-time Fourier transform, ambiguity and Wigner functions, the
//! Fourier-Wigner transform `F_W`, its inverse `rho`, twisted convolution
//! and the Weyl calculus on `Z_N`.
//!
//! Conventions (fixed by the `N = 3` convention oracle in the tests):
//!
//! * `F_W S(z) = conj(h(z)) tr(pi(-z) S)` with `h` the half-phase,
//! * `rho(f) = (1/N) sum_z f(z) conj(h(z)) pi(z)`,
//! * `(f # g)(z) = (1/N) sum_{z'} f(z - z') g(z') exp(2 pi i 2bar sigma(z, z') / N)`.
//!
//! `rho` is computed as the exact inverse of `F_W` (a per-diagonal inverse
//! DFT); the superposition sum is available separately as
//! [`rho_superposition`].

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dft::{dft_backward, dft_forward, Roots};
use crate::error::Result;
use crate::operator::{OperatorMatrix, Signal};
use crate::phase_space::{
    half_phase, half_phase_residue, symplectic_fourier, symplectic_residue, GroupParams, PhaseFunction,
};

/// `V_phi psi(x, omega) = <psi, pi(x, omega) phi>`, one length-N DFT per time shift.
pub fn stft(psi: &Signal, phi: &Signal) -> Result<PhaseFunction> {
    let params = psi.params();
    params.check_same(phi.params())?;
    let n = params.n();
    let roots = Roots::new(n);
    let (p, w) = (psi.values(), phi.values());
    let mut values = Vec::with_capacity(params.dim());
    let mut slice = Vec::with_capacity(n);
    for x in 0..n {
        slice.clear();
        slice.extend((0..n).map(|t| p[t] * w[(t + n - x) % n].conj()));
        values.extend(dft_forward(&slice, &roots));
    }
    PhaseFunction::new(params, values)
}

/// `A(psi, phi)(z) = h(z) V_phi psi(z)`.
pub fn ambiguity(psi: &Signal, phi: &Signal) -> Result<PhaseFunction> {
    let v = stft(psi, phi)?;
    Ok(PhaseFunction::from_fn(v.params(), |z| half_phase(z) * v[z]))
}

/// `W(psi, phi) = F_sigma A(psi, phi)`.
pub fn cross_wigner(psi: &Signal, phi: &Signal) -> Result<PhaseFunction> {
    Ok(symplectic_fourier(&ambiguity(psi, phi)?))
}

/// `F_W S(z) = conj(h(z)) tr(pi(-z) S)`.
///
/// `tr(pi(-z) S) = sum_t exp(-2 pi i omega t / N) S(t + x, t)`, so each
/// time shift `x` is one DFT along the `x`-th cyclic diagonal.
pub fn fourier_wigner(s: &OperatorMatrix) -> PhaseFunction {
    let params = s.params();
    let n = params.n();
    let roots = Roots::new(n);
    let mut values = Vec::with_capacity(params.dim());
    let mut diagonal = Vec::with_capacity(n);
    for x in 0..n {
        diagonal.clear();
        diagonal.extend((0..n).map(|t| s.get((t + x) % n, t)));
        for (omega, tr) in dft_forward(&diagonal, &roots).into_iter().enumerate() {
            let k = half_phase_residue(params.point(x as i64, omega as i64));
            values.push(roots.pow_neg(k) * tr);
        }
    }
    PhaseFunction::new(params, values).expect("finite transform of a finite operator")
}

/// Integrated Schrödinger representation, computed as the inverse of [`fourier_wigner`].
pub fn rho(f: &PhaseFunction) -> OperatorMatrix {
    let params = f.params();
    let n = params.n();
    let roots = Roots::new(n);
    let scale = 1.0 / n as f64;
    let mut entries = alloc::vec![Complex64::new(0.0, 0.0); params.dim()];
    let mut row = Vec::with_capacity(n);
    for x in 0..n {
        row.clear();
        row.extend((0..n).map(|omega| {
            let k = half_phase_residue(params.point(x as i64, omega as i64));
            roots.pow(k) * f.at(x, omega)
        }));
        for (t, v) in dft_backward(&row, &roots).into_iter().enumerate() {
            entries[((t + x) % n) * n + t] = v * scale;
        }
    }
    OperatorMatrix::new(params, entries).expect("finite inverse transform of a finite function")
}

/// `(1/N) sum_z f(z) conj(h(z)) pi(z)` evaluated term by term.
///
/// Agrees with [`rho`]; kept as an independent route for cross-checks.
pub fn rho_superposition(f: &PhaseFunction) -> OperatorMatrix {
    let params = f.params();
    let n = params.n();
    let roots = Roots::new(n);
    let mut entries = alloc::vec![Complex64::new(0.0, 0.0); params.dim()];
    for z in params.points() {
        let coeff = f[z] * roots.pow_neg(half_phase_residue(z)) / n as f64;
        // pi(z) has entry exp(2 pi i omega t / N) at (t, t - x)
        for t in 0..n {
            entries[t * n + (t + n - z.x()) % n] += coeff * roots.pow(z.omega() * t);
        }
    }
    OperatorMatrix::new(params, entries).expect("finite superposition")
}

/// Twisted convolution, `rho(f # g) = rho(f) rho(g)`.
pub fn twisted_convolution(f: &PhaseFunction, g: &PhaseFunction) -> Result<PhaseFunction> {
    let params = f.params();
    params.check_same(g.params())?;
    Ok(twisted_convolution_unchecked(params, f, g))
}

fn twisted_convolution_unchecked(params: GroupParams, f: &PhaseFunction, g: &PhaseFunction) -> PhaseFunction {
    let n = params.n();
    let half = params.half();
    let roots = Roots::new(n);
    PhaseFunction::from_fn(params, |z| {
        params
            .points()
            .map(|w| f[z - w] * g[w] * roots.pow(half * symplectic_residue(z, w)))
            .sum::<Complex64>()
            / n as f64
    })
}

/// Weyl transform `L_f = rho(F_sigma f)`.
pub fn weyl_transform(f: &PhaseFunction) -> OperatorMatrix {
    rho(&symplectic_fourier(f))
}

/// Weyl symbol `F_sigma(F_W A)`, the inverse of [`weyl_transform`].
pub fn weyl_symbol(a: &OperatorMatrix) -> PhaseFunction {
    symplectic_fourier(&fourier_wigner(a))
}

//! Sampled approximations of `L^2(R)` and of functions on the phase plane `R^2`.
//!
//! A [`SampledLine`] covers `[-L, L)` with `n` points `t_k = (k - n/2) dt`,
//! `dt = 2L/n`. Short-time Fourier transforms are evaluated at time shifts on
//! the same grid and at the dual frequencies `omega_m = (m - n/2) / (2L)`, so
//! a phase-plane cell has area `dt / (2L) = 1/n`. Signals are treated as
//! periodic; for the Gaussian-type inputs used here the wrap-around error is
//! far below the tolerances of the checks.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::dft::{fft2_forward, fft_forward};
use crate::error::{Error, Result};
use crate::linalg;
use crate::phase_space::lp_norm;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[inline]
fn cis(theta: f64) -> Complex64 {
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// Uniform periodic grid on `[-L, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledLine {
    n: usize,
    half_width: f64,
}

impl Default for SampledLine {
    fn default() -> Self {
        Self {
            n: 256,
            half_width: 8.0,
        }
    }
}

impl SampledLine {
    pub fn new(n: usize, half_width: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid("n must be a power of two and at least 16"));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidGrid("half width must be positive and finite"));
        }
        Ok(Self { n, half_width })
    }

    /// Grid whose time and frequency spacings coincide, `L = sqrt(n) / 2`.
    pub fn balanced(n: usize) -> Result<Self> {
        Self::new(n, libm::sqrt(n as f64) / 2.0)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Sample spacing `dt = 2L/n`.
    #[inline]
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Dual frequency spacing `1/(2L)`.
    #[inline]
    pub fn frequency_spacing(&self) -> f64 {
        0.5 / self.half_width
    }

    #[inline]
    pub fn point(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64) * self.spacing()
    }

    #[inline]
    pub fn frequency(&self, m: usize) -> f64 {
        (m as f64 - (self.n / 2) as f64) * self.frequency_spacing()
    }

    /// Area of one phase-plane cell, `dt / (2L) = 1/n`.
    #[inline]
    pub fn cell_area(&self) -> f64 {
        self.spacing() * self.frequency_spacing()
    }
}

/// Samples of a function on a [`SampledLine`].
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumSignal {
    line: SampledLine,
    samples: Vec<Complex64>,
}

impl ContinuumSignal {
    pub fn new(line: SampledLine, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != line.n {
            return Err(Error::DimensionMismatch {
                expected: line.n,
                found: samples.len(),
            });
        }
        if let Some(i) = samples.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { line, samples })
    }

    pub fn from_fn(line: SampledLine, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            line,
            samples: (0..line.n).map(|k| f(line.point(k))).collect(),
        }
    }

    pub fn line(&self) -> SampledLine {
        self.line
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// `<self, other> = dt sum self conj(other)`.
    pub fn inner(&self, other: &ContinuumSignal) -> Result<Complex64> {
        if self.line != other.line {
            return Err(Error::IncompatibleGrids);
        }
        let s: Complex64 = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.line.spacing())
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.line.spacing() * self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>())
    }

    pub fn scale(&self, c: Complex64) -> ContinuumSignal {
        ContinuumSignal {
            line: self.line,
            samples: self.samples.iter().map(|v| v * c).collect(),
        }
    }

    /// `t -> psi(-t)` on the periodic grid.
    pub fn parity(&self) -> ContinuumSignal {
        let n = self.line.n;
        ContinuumSignal {
            line: self.line,
            samples: (0..n).map(|k| self.samples[(n - k) % n]).collect(),
        }
    }
}

/// The `L^2`-normalized Gaussian `2^{1/4} exp(-pi t^2)`.
pub fn gaussian_signal(line: SampledLine) -> ContinuumSignal {
    let c = libm::pow(2.0, 0.25);
    ContinuumSignal::from_fn(line, |t| Complex64::new(c * libm::exp(-PI * t * t), 0.0))
}

/// Value at `t` of the `k`-th Hermite function, normalized so that the 0-th one
/// is `2^{1/4} exp(-pi t^2)`; `{h_k}` is orthonormal in `L^2(R)`.
pub fn hermite_value(k: usize, t: f64) -> f64 {
    let s = libm::sqrt(2.0 * PI) * t;
    // normalized recurrence for psi_j(s) = H_j(s) e^{-s^2/2} / sqrt(2^j j! sqrt(pi))
    let mut prev = 0.0;
    let mut cur = libm::pow(2.0 * PI, 0.25) * libm::pow(PI, -0.25) * libm::exp(-0.5 * s * s);
    for j in 0..k {
        let next = libm::sqrt(2.0 / (j + 1) as f64) * s * cur - libm::sqrt(j as f64 / (j + 1) as f64) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Samples of [`hermite_value`] for a fixed order.
pub fn hermite_function(line: SampledLine, k: usize) -> ContinuumSignal {
    ContinuumSignal::from_fn(line, |t| Complex64::new(hermite_value(k, t), 0.0))
}

/// A sampled function on the phase plane, indexed by time shift `j` (outer)
/// and frequency `m` (inner), at `x_j = line.point(j)`, `omega_m = line.frequency(m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePlane {
    line: SampledLine,
    values: Vec<Complex64>,
}

impl PhasePlane {
    pub fn new(line: SampledLine, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != line.n * line.n {
            return Err(Error::DimensionMismatch {
                expected: line.n * line.n,
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { line, values })
    }

    pub fn from_fn(line: SampledLine, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let n = line.n;
        Self {
            line,
            values: (0..n * n).map(|i| f(line.point(i / n), line.frequency(i % n))).collect(),
        }
    }

    pub fn line(&self) -> SampledLine {
        self.line
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, j: usize, m: usize) -> Complex64 {
        self.values[j * self.line.n + m]
    }

    /// `(x, omega, value)` for every grid point.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, Complex64)> + '_ {
        let n = self.line.n;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.line.point(i / n), self.line.frequency(i % n), v))
    }

    /// `(integral |F|^p dz)^{1/p}` with cell area `1/n`, or `sup |F|`.
    pub fn norm_lp(&self, p: f64) -> Result<f64> {
        lp_norm(&self.values, p, self.line.cell_area())
    }

    /// Largest `|F(z)|` over grid points with `r_min <= |z| <= r_max`.
    pub fn max_abs_in_annulus(&self, r_min: f64, r_max: f64) -> f64 {
        self.iter()
            .filter(|(x, w, _)| {
                let r = libm::sqrt(x * x + w * w);
                r >= r_min && r <= r_max
            })
            .fold(0.0, |m, (_, _, v)| f64::max(m, v.norm()))
    }

    pub fn scale(&self, c: Complex64) -> PhasePlane {
        PhasePlane {
            line: self.line,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    fn add_assign(&mut self, other: &PhasePlane) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += b;
        }
    }
}

/// `V_phi psi(x_j, omega_m) = dt sum_k psi(t_k) conj(phi(t_k - x_j)) exp(-2 pi i omega_m t_k)`.
///
/// One FFT per time shift; the grid offset contributes the factor `(-1)^{m - n/2}`.
pub fn continuum_stft(psi: &ContinuumSignal, phi: &ContinuumSignal) -> Result<PhasePlane> {
    if psi.line != phi.line {
        return Err(Error::IncompatibleGrids);
    }
    let line = psi.line;
    let n = line.n;
    let half = n / 2;
    let dt = line.spacing();
    let mut values = vec![ZERO; n * n];
    let mut slice = vec![ZERO; n];
    for j in 0..n {
        // t_k - x_j = t_{k - j + n/2}
        for (k, s) in slice.iter_mut().enumerate() {
            *s = psi.samples[k] * phi.samples[(k + half + n - j) % n].conj();
        }
        fft_forward(&mut slice);
        for m in 0..n {
            let sign = if (m + half).is_multiple_of(2) { dt } else { -dt };
            values[j * n + m] = slice[(m + half) % n] * sign;
        }
    }
    Ok(PhasePlane { line, values })
}

/// `A(psi, phi)(z) = exp(pi i x omega) V_phi psi(z)`, which is also `F_W(psi (x) phi)`.
pub fn continuum_ambiguity(psi: &ContinuumSignal, phi: &ContinuumSignal) -> Result<PhasePlane> {
    let v = continuum_stft(psi, phi)?;
    let line = v.line;
    let n = line.n;
    let values = v
        .values
        .iter()
        .enumerate()
        .map(|(i, &val)| val * cis(PI * line.point(i / n) * line.frequency(i % n)))
        .collect();
    Ok(PhasePlane { line, values })
}

/// Outcome of comparing `F_W(phi (x) phi)` for the standard Gaussian with closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GaussianFwCheck {
    /// `max_{|z| <= 3} |F_W(phi (x) phi)(z) - exp(-pi |z|^2 / 2)|`.
    pub max_error: f64,
    /// Deviation from `exp(2 pi i x omega) exp(-pi |z|^2 / 2)` over the same disc.
    pub max_error_chirped: f64,
    /// `|F_W(phi (x) phi)(0) - 1|`.
    pub origin_error: f64,
}

/// Radius of the disc on which [`gaussian_fw_check`] compares values.
pub const GAUSSIAN_CHECK_RADIUS: f64 = 3.0;

pub fn gaussian_fw_check(line: SampledLine) -> GaussianFwCheck {
    let phi = gaussian_signal(line);
    let fw = continuum_ambiguity(&phi, &phi).expect("same grid");
    let mut max_error: f64 = 0.0;
    let mut max_error_chirped: f64 = 0.0;
    let mut origin_error = f64::NAN;
    for (x, w, v) in fw.iter() {
        let r2 = x * x + w * w;
        if r2 > GAUSSIAN_CHECK_RADIUS * GAUSSIAN_CHECK_RADIUS {
            continue;
        }
        let envelope = libm::exp(-0.5 * PI * r2);
        max_error = max_error.max((v - envelope).norm());
        max_error_chirped = max_error_chirped.max((v - cis(2.0 * PI * x * w) * envelope).norm());
        if r2 == 0.0 {
            origin_error = (v - Complex64::new(1.0, 0.0)).norm();
        }
    }
    GaussianFwCheck {
        max_error,
        max_error_chirped,
        origin_error,
    }
}

/// `(integral |V_phi psi|^p dz) / ((2/p) ||phi||^p ||psi||^p)`, at most one by Lieb's inequality.
pub fn lieb_ratio(psi: &ContinuumSignal, phi: &ContinuumSignal, p: f64) -> Result<f64> {
    if !(2.0..=64.0).contains(&p) {
        return Err(Error::InvalidExponent(p));
    }
    let v = continuum_stft(psi, phi)?;
    let integral = libm::pow(v.norm_lp(p)?, p);
    Ok(integral / ((2.0 / p) * libm::pow(phi.norm(), p) * libm::pow(psi.norm(), p)))
}

/// `S = sum_m w_m psi_m (x) phi_m` on a sampled line.
#[derive(Debug, Clone)]
pub struct FiniteRankOperator {
    line: SampledLine,
    components: Vec<(Complex64, ContinuumSignal, ContinuumSignal)>,
}

impl FiniteRankOperator {
    pub fn new(components: Vec<(Complex64, ContinuumSignal, ContinuumSignal)>) -> Result<Self> {
        let line = components
            .first()
            .map(|c| c.1.line)
            .ok_or(Error::InvalidGrid("finite-rank operator needs at least one component"))?;
        if components.iter().any(|(_, a, b)| a.line != line || b.line != line) {
            return Err(Error::IncompatibleGrids);
        }
        Ok(Self { line, components })
    }

    pub fn rank_one(psi: ContinuumSignal, phi: ContinuumSignal) -> Result<Self> {
        Self::new(vec![(Complex64::new(1.0, 0.0), psi, phi)])
    }

    pub fn line(&self) -> SampledLine {
        self.line
    }

    pub fn components(&self) -> &[(Complex64, ContinuumSignal, ContinuumSignal)] {
        &self.components
    }

    fn gram(signals: &[&ContinuumSignal]) -> Vec<Complex64> {
        let r = signals.len();
        let mut g = vec![ZERO; r * r];
        for i in 0..r {
            for j in 0..r {
                g[i * r + j] = signals[j].inner(signals[i]).expect("same grid");
            }
        }
        g
    }

    /// Nonzero singular values, descending, via `G_psi^{1/2} W G_phi^{1/2}`.
    pub fn singular_values(&self) -> Vec<f64> {
        let r = self.components.len();
        let psis: Vec<&ContinuumSignal> = self.components.iter().map(|c| &c.1).collect();
        let phis: Vec<&ContinuumSignal> = self.components.iter().map(|c| &c.2).collect();
        let a = linalg::hermitian_sqrt(&Self::gram(&psis), r);
        let b = linalg::hermitian_sqrt(&Self::gram(&phis), r);
        let mut m = vec![ZERO; r * r];
        for i in 0..r {
            for j in 0..r {
                m[i * r + j] = (0..r).map(|k| a[i * r + k] * self.components[k].0 * b[k * r + j]).sum();
            }
        }
        linalg::singular_values(&m, r, r)
    }

    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        crate::operator::schatten_norm_of(&self.singular_values(), p)
    }

    /// `F_W S = sum_m w_m A(psi_m, phi_m)`.
    pub fn fourier_wigner(&self) -> PhasePlane {
        let n = self.line.n;
        let mut acc = PhasePlane {
            line: self.line,
            values: vec![ZERO; n * n],
        };
        for (w, psi, phi) in &self.components {
            acc.add_assign(&continuum_ambiguity(psi, phi).expect("same grid").scale(*w));
        }
        acc
    }

    /// Sampled matrix acting on grid values, entry `(a, b) = dt sum_m w_m psi_m(t_a) conj(phi_m(t_b))`.
    pub fn to_line_operator(&self) -> LineOperator {
        let n = self.line.n;
        let dt = self.line.spacing();
        let mut entries = vec![ZERO; n * n];
        for (w, psi, phi) in &self.components {
            for a in 0..n {
                let left = w * psi.samples[a] * dt;
                for b in 0..n {
                    entries[a * n + b] += left * phi.samples[b].conj();
                }
            }
        }
        LineOperator { line: self.line, entries }
    }
}

/// `||F_W S||_{L^q} / ((2/q)^{1/q} ||S||_{T^1})`, at most one for `q >= 2`.
pub fn lieb_traceclass_ratio(s: &FiniteRankOperator, q: f64) -> Result<f64> {
    if q.is_nan() || q < 2.0 {
        return Err(Error::InvalidExponent(q));
    }
    let constant = if q.is_infinite() { 1.0 } else { libm::pow(2.0 / q, 1.0 / q) };
    Ok(s.fourier_wigner().norm_lp(q)? / (constant * s.schatten_norm(1.0)?))
}

/// `||F_W S||_{L^q} / ||S||_{T^p}` with `1/p + 1/q = 1`, `p` in `[1, 2]`.
pub fn hausdorff_young_ratio(s: &FiniteRankOperator, p: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::InvalidExponent(p));
    }
    let q = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
    Ok(s.fourier_wigner().norm_lp(q)? / s.schatten_norm(p)?)
}

fn mixed_norm(magnitudes: &[f64], outer: usize, inner: usize, p: f64, q: f64, inner_w: f64, outer_w: f64) -> f64 {
    // magnitudes indexed [outer][inner]; L^p over inner, then L^q over outer
    let inner_norms: Vec<Complex64> = (0..outer)
        .map(|o| {
            let row: Vec<Complex64> = magnitudes[o * inner..(o + 1) * inner]
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect();
            Complex64::new(lp_norm(&row, p, inner_w).expect("validated exponent"), 0.0)
        })
        .collect();
    lp_norm(&inner_norms, q, outer_w).expect("validated exponent")
}

fn check_exponents(p: f64, q: f64) -> Result<()> {
    for e in [p, q] {
        if e.is_nan() || e < 1.0 {
            return Err(Error::InvalidExponent(e));
        }
    }
    Ok(())
}

/// `||psi||_{M^{p,q}} = (integral (integral |V_g psi(x, omega)|^p dx)^{q/p} domega)^{1/q}`
/// with `g` the normalized Gaussian window.
pub fn modulation_norm(psi: &ContinuumSignal, p: f64, q: f64) -> Result<f64> {
    check_exponents(p, q)?;
    let line = psi.line;
    let n = line.n;
    let v = continuum_stft(psi, &gaussian_signal(line))?;
    // reorder to [omega][x]
    let mut mags = vec![0.0; n * n];
    for j in 0..n {
        for m in 0..n {
            mags[m * n + j] = v.at(j, m).norm();
        }
    }
    Ok(mixed_norm(&mags, n, n, p, q, line.spacing(), line.frequency_spacing()))
}

/// Samples of a function on `R^2` over an `n x n` grid centred at the origin,
/// with spacings `(h1, h2)` along the two axes; row-major in the first axis.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneSamples {
    pub n: usize,
    pub spacing: (f64, f64),
    pub values: Vec<Complex64>,
}

impl From<&PhasePlane> for PlaneSamples {
    fn from(plane: &PhasePlane) -> Self {
        PlaneSamples {
            n: plane.line.n,
            spacing: (plane.line.spacing(), plane.line.frequency_spacing()),
            values: plane.values.clone(),
        }
    }
}

/// Mixed modulation norm of a function on `R^2` with the window `g (x) g`:
/// `L^p` over the two shift variables, then `L^q` over the two frequencies.
pub fn modulation_norm_2d(f: &PlaneSamples, p: f64, q: f64) -> Result<f64> {
    check_exponents(p, q)?;
    let n = f.n;
    if n < 2 || !n.is_power_of_two() || f.values.len() != n * n {
        return Err(Error::InvalidGrid("plane samples must be n x n with n a power of two"));
    }
    let (h1, h2) = f.spacing;
    let half = n / 2;
    let c = libm::pow(2.0, 0.25);
    let window = |h: f64| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let t = (i as f64 - half as f64) * h;
                c * libm::exp(-PI * t * t)
            })
            .collect()
    };
    let (w1, w2) = (window(h1), window(h2));
    let cell = h1 * h2;
    // mags[b][a]: frequency outer, shift inner
    let mut mags = vec![0.0; n * n * n * n];
    let mut buf = vec![ZERO; n * n];
    for a1 in 0..n {
        for a2 in 0..n {
            for k1 in 0..n {
                let g1 = w1[(k1 + half + n - a1) % n];
                for k2 in 0..n {
                    let g2 = w2[(k2 + half + n - a2) % n];
                    buf[k1 * n + k2] = f.values[k1 * n + k2] * (g1 * g2);
                }
            }
            fft2_forward(&mut buf, n, n);
            let a = a1 * n + a2;
            for (b, v) in buf.iter().enumerate() {
                mags[b * n * n + a] = v.norm() * cell;
            }
        }
    }
    let freq_cell = 1.0 / (n as f64 * h1) / (n as f64 * h2);
    Ok(mixed_norm(&mags, n * n, n * n, p, q, cell, freq_cell))
}

/// A bounded operator on the sampled line, as the matrix acting on grid values.
#[derive(Debug, Clone, PartialEq)]
pub struct LineOperator {
    line: SampledLine,
    entries: Vec<Complex64>,
}

impl LineOperator {
    /// Integral operator with kernel `k(t_a, t_b)`, row-major samples.
    pub fn from_kernel(line: SampledLine, kernel: &[Complex64]) -> Result<Self> {
        let n = line.n;
        if kernel.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: kernel.len(),
            });
        }
        let dt = line.spacing();
        Ok(Self {
            line,
            entries: kernel.iter().map(|k| k * dt).collect(),
        })
    }

    pub fn line(&self) -> SampledLine {
        self.line
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn singular_values(&self) -> Vec<f64> {
        linalg::singular_values(&self.entries, self.line.n, self.line.n)
    }

    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        crate::operator::schatten_norm_of(&self.singular_values(), p)
    }

    fn parity_conjugate(&self) -> LineOperator {
        let n = self.line.n;
        LineOperator {
            line: self.line,
            entries: (0..n * n).map(|i| self.entries[((n - i / n) % n) * n + (n - i % n) % n]).collect(),
        }
    }
}

/// `exp(2 pi i omega_m t_a)` for all `(m, a)`.
fn modulation_table(line: SampledLine) -> Vec<Complex64> {
    let n = line.n;
    (0..n * n)
        .map(|i| cis(2.0 * PI * line.frequency(i / n) * line.point(i % n)))
        .collect()
}

/// `f * S = integral f(z) alpha_z(S) dz` on the sampled line, `z` over the phase-plane grid.
pub fn line_conv_fun_op(f: &PhasePlane, s: &LineOperator) -> Result<LineOperator> {
    if f.line != s.line {
        return Err(Error::IncompatibleGrids);
    }
    let line = s.line;
    let n = line.n;
    let half = n / 2;
    let table = modulation_table(line);
    let cell = line.cell_area();
    let mut out = vec![ZERO; n * n];
    for j in 0..n {
        // x_j = (j - n/2) dt is a cyclic index shift
        let shift = (j + n - half) % n;
        for m in 0..n {
            let w = f.at(j, m) * cell;
            if w == ZERO {
                continue;
            }
            let row_mod = &table[m * n..(m + 1) * n];
            for a in 0..n {
                let sa = (a + n - shift) % n;
                let left = w * row_mod[a];
                for b in 0..n {
                    let sb = (b + n - shift) % n;
                    out[a * n + b] += left * row_mod[b].conj() * s.entries[sa * n + sb];
                }
            }
        }
    }
    Ok(LineOperator { line, entries: out })
}

/// `(T * S)(z) = tr(T alpha_z(S_check))` on the phase-plane grid.
pub fn line_conv_op_op(t: &LineOperator, s: &LineOperator) -> Result<PhasePlane> {
    if t.line != s.line {
        return Err(Error::IncompatibleGrids);
    }
    let line = s.line;
    let n = line.n;
    let half = n / 2;
    let table = modulation_table(line);
    let sc = s.parity_conjugate();
    let mut values = vec![ZERO; n * n];
    for j in 0..n {
        let shift = (j + n - half) % n;
        for m in 0..n {
            let row_mod = &table[m * n..(m + 1) * n];
            let mut acc = ZERO;
            for a in 0..n {
                for b in 0..n {
                    // alpha_z(S_check)(b, a)
                    let v = row_mod[b] * row_mod[a].conj() * sc.entries[((b + n - shift) % n) * n + (a + n - shift) % n];
                    acc += t.entries[a * n + b] * v;
                }
            }
            values[j * n + m] = acc;
        }
    }
    Ok(PhasePlane { line, values })
}

/// Monitored ratio with its ingredients; no threshold applies.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ModulationRatio {
    pub ratio: f64,
    pub numerator: f64,
    pub kernel_m1: f64,
    pub other_factor: f64,
}

/// `||f * S||_{T^p} / (||k||_{M^1} ||f||_{M^{p,inf}})` for the integral operator `S` with kernel `k`.
pub fn locop_modspace_ratio(f: &PhasePlane, kernel: &[Complex64], p: f64) -> Result<ModulationRatio> {
    let line = f.line;
    let s = LineOperator::from_kernel(line, kernel)?;
    let numerator = line_conv_fun_op(f, &s)?.schatten_norm(p)?;
    let kernel_m1 = modulation_norm_2d(&kernel_samples(line, kernel), 1.0, 1.0)?;
    let other_factor = modulation_norm_2d(&PlaneSamples::from(f), p, f64::INFINITY)?;
    Ok(ModulationRatio {
        ratio: numerator / (kernel_m1 * other_factor),
        numerator,
        kernel_m1,
        other_factor,
    })
}

/// `||T * S||_{M^1} / (||k||_{M^1} ||T||_{T^1})` for the integral operator `S` with kernel `k`.
pub fn feichtinger_ratio(t: &FiniteRankOperator, kernel: &[Complex64]) -> Result<ModulationRatio> {
    let line = t.line;
    let s = LineOperator::from_kernel(line, kernel)?;
    let ts = line_conv_op_op(&t.to_line_operator(), &s)?;
    let numerator = modulation_norm_2d(&PlaneSamples::from(&ts), 1.0, 1.0)?;
    let kernel_m1 = modulation_norm_2d(&kernel_samples(line, kernel), 1.0, 1.0)?;
    let other_factor = t.schatten_norm(1.0)?;
    Ok(ModulationRatio {
        ratio: numerator / (kernel_m1 * other_factor),
        numerator,
        kernel_m1,
        other_factor,
    })
}

fn kernel_samples(line: SampledLine, kernel: &[Complex64]) -> PlaneSamples {
    PlaneSamples {
        n: line.n,
        spacing: (line.spacing(), line.spacing()),
        values: kernel.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn line() -> SampledLine {
        SampledLine::new(256, 8.0).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(SampledLine::new(8, 1.0).is_err());
        assert!(SampledLine::new(48, 1.0).is_err());
        assert!(SampledLine::new(64, 0.0).is_err());
        let l = line();
        assert!((l.cell_area() - 1.0 / 256.0).abs() < 1e-18);
        assert_eq!(l.point(128), 0.0);
        assert_eq!(l.frequency(128), 0.0);
        assert_eq!(SampledLine::default(), l);
    }

    #[test]
    fn gaussian_examples() {
        let g = gaussian_signal(line());
        assert!((g.norm() * g.norm() - 1.0).abs() < 1e-10);
        assert_eq!(g.samples()[128], c(2f64.powf(0.25), 0.0));
        let p = g.parity();
        for k in 1..256 {
            assert_eq!(p.samples()[k], g.samples()[k]);
        }
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        let l = line();
        let h: Vec<_> = (0..6).map(|k| hermite_function(l, k)).collect();
        assert!(h[0].samples().iter().zip(gaussian_signal(l).samples()).all(|(a, b)| (a - b).norm() < 1e-15));
        for i in 0..6 {
            for j in 0..6 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((h[i].inner(&h[j]).unwrap() - c(expect, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn stft_of_gaussian_matches_closed_form() {
        let g = gaussian_signal(line());
        let v = continuum_stft(&g, &g).unwrap();
        assert!((v.at(128, 128) - c(1.0, 0.0)).norm() < 1e-10);
        for (x, w, val) in v.iter() {
            if x * x + w * w <= 9.0 {
                // V_g g(x, omega) = exp(-pi i x omega) exp(-pi |z|^2 / 2)
                let expect = cis(-PI * x * w) * (-0.5 * PI * (x * x + w * w)).exp();
                assert!((val - expect).norm() < 1e-8);
                assert!((val.norm_sqr() - (-PI * (x * x + w * w)).exp()).abs() < 1e-8);
            }
        }
        let l2 = v.norm_lp(2.0).unwrap();
        assert!((l2 * l2 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn gaussian_fourier_wigner_is_real_gaussian() {
        let check = gaussian_fw_check(line());
        assert!(check.max_error < 1e-6, "{check:?}");
        assert!(check.origin_error < 1e-10);
        // the chirped closed form is off by |exp(2 pi i x omega) - 1| exp(-pi |z|^2 / 2)
        assert!(check.max_error_chirped > 0.1);
    }

    #[test]
    fn lieb_equality_for_gaussians() {
        let g = gaussian_signal(line());
        for p in [2.0, 3.0, 4.0, 6.0, 20.0] {
            assert!((lieb_ratio(&g, &g, p).unwrap() - 1.0).abs() < 1e-6, "p = {p}");
        }
        assert_eq!(lieb_ratio(&g, &g, 1.5), Err(Error::InvalidExponent(1.5)));
        let h = hermite_function(line(), 3);
        for p in [3.0, 4.0, 6.0] {
            let r = lieb_ratio(&h, &g, p).unwrap();
            assert!(r < 1.0, "p = {p}: {r}");
        }
        assert!((lieb_ratio(&h, &g, 2.0).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn trace_class_lieb_and_hausdorff_young() {
        let l = line();
        let s = FiniteRankOperator::rank_one(gaussian_signal(l), gaussian_signal(l)).unwrap();
        for q in [2.0, 4.0] {
            let direct = lieb_ratio(&gaussian_signal(l), &gaussian_signal(l), q).unwrap();
            let r = lieb_traceclass_ratio(&s, q).unwrap();
            assert!((r - 1.0).abs() < 1e-6);
            assert!((libm::pow(direct, 1.0 / q) - r).abs() < 1e-9);
        }
        let two = FiniteRankOperator::new(vec![
            (c(0.7, 0.0), hermite_function(l, 0), hermite_function(l, 0)),
            (c(0.0, 0.3), hermite_function(l, 1), hermite_function(l, 2)),
        ])
        .unwrap();
        let sv = two.singular_values();
        assert!((sv[0] - 0.7).abs() < 1e-9 && (sv[1] - 0.3).abs() < 1e-9);
        for q in [2.0, 3.0, 6.0, f64::INFINITY] {
            assert!(lieb_traceclass_ratio(&two, q).unwrap() <= 1.0 + 1e-6);
        }
        assert!(lieb_traceclass_ratio(&two, 2.0).unwrap() <= 1.0);
        assert!(hausdorff_young_ratio(&two, 1.0).unwrap() <= 1.0 + 1e-6);
        assert!((hausdorff_young_ratio(&two, 2.0).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn modulation_norm_examples() {
        let g = gaussian_signal(line());
        assert!((modulation_norm(&g, 2.0, 2.0).unwrap() - g.norm()).abs() < 1e-8);
        let psi = ContinuumSignal::from_fn(line(), |t| c((-PI * (t - 0.5) * (t - 0.5)).exp(), t * (-PI * t * t).exp()));
        let a = modulation_norm(&psi, 1.0, 3.0).unwrap();
        assert!(a.is_finite() && a > 0.0);
        let b = modulation_norm(&psi.scale(c(0.0, -2.5)), 1.0, 3.0).unwrap();
        assert!((b - 2.5 * a).abs() < 1e-12 * b);
        assert!(modulation_norm(&g, 0.5, 1.0).is_err());
    }

    #[test]
    fn plane_modulation_norm_of_gaussian_product() {
        // F = g (x) g on a balanced grid has ||F||_{M^2} = ||F||_{L^2} = 1
        let l = SampledLine::balanced(16).unwrap();
        let g = gaussian_signal(l);
        let plane = PhasePlane::from_fn(l, |x, w| {
            c(2f64.sqrt() * (-PI * (x * x + w * w)).exp(), 0.0)
        });
        let _ = g;
        let m2 = modulation_norm_2d(&PlaneSamples::from(&plane), 2.0, 2.0).unwrap();
        assert!((m2 - 1.0).abs() < 1e-6, "{m2}");
    }

    #[test]
    fn line_convolutions_are_homogeneous() {
        let l = SampledLine::balanced(16).unwrap();
        let g = gaussian_signal(l);
        let kernel: Vec<Complex64> = (0..256)
            .map(|i| g.samples()[i / 16] * g.samples()[i % 16])
            .collect();
        let f = PhasePlane::from_fn(l, |x, w| c((-0.3 * PI * (x * x + w * w)).exp(), 0.0));
        let base = locop_modspace_ratio(&f, &kernel, 1.0).unwrap();
        assert!(base.ratio.is_finite() && base.ratio > 0.0);
        let scaled = locop_modspace_ratio(&f.scale(c(3.0, 1.0)), &kernel, 1.0).unwrap();
        assert!((scaled.ratio - base.ratio).abs() < 1e-10 * base.ratio);
        let k2: Vec<Complex64> = kernel.iter().map(|v| v * 0.25).collect();
        let scaled = locop_modspace_ratio(&f, &k2, 1.0).unwrap();
        assert!((scaled.ratio - base.ratio).abs() < 1e-10 * base.ratio);

        let t = FiniteRankOperator::rank_one(g.clone(), g.clone()).unwrap();
        let fr = feichtinger_ratio(&t, &kernel).unwrap();
        assert!(fr.ratio.is_finite() && fr.ratio > 0.0);
    }

    #[test]
    fn line_conv_op_op_integrates_to_trace_product() {
        let l = SampledLine::balanced(16).unwrap();
        let a = FiniteRankOperator::rank_one(hermite_function(l, 0), hermite_function(l, 1)).unwrap();
        let b = FiniteRankOperator::rank_one(hermite_function(l, 2), hermite_function(l, 2)).unwrap();
        let (ta, tb) = (a.to_line_operator(), b.to_line_operator());
        let ab = line_conv_op_op(&ta, &tb).unwrap();
        let integral: Complex64 = ab.values().iter().sum::<Complex64>() * l.cell_area();
        let tr = |op: &LineOperator| (0..16).map(|i| op.entries()[i * 16 + i]).sum::<Complex64>();
        assert!((integral - tr(&ta) * tr(&tb)).norm() < 1e-8);
    }
}

//! The finite phase space `Z_N x Z_N`.
//!
//! Points are pairs `(x, omega)` of residues mod `N`, where `x` is a time
//! shift and `omega` a frequency shift. Functions on the phase space carry
//! the measure `nu = (1/N) * counting`, so that `nu(Z_N x Z_N) = N` and the
//! transforms built on top are unitary with constant one. `N` is restricted
//! to odd values so that 2 is invertible and the half-phase
//! `exp(2 pi i 2bar x omega / N)` with `2bar = (N + 1) / 2` is well defined.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::dft::{dft_backward, dft_forward, Roots};
use crate::error::{Error, Result};

/// The modulus `N` of the cyclic group `Z_N`. Always odd and at least 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupParams {
    n: usize,
}

impl GroupParams {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::UnsupportedModulus(n));
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n
    }

    /// Number of phase-space points, `N^2`.
    #[inline]
    pub fn dim(self) -> usize {
        self.n * self.n
    }

    /// The inverse of 2 modulo `N`.
    #[inline]
    pub fn half(self) -> usize {
        self.n.div_ceil(2)
    }

    /// Reduces an arbitrary integer into `0..N`.
    #[inline]
    pub fn residue(self, v: i64) -> usize {
        v.rem_euclid(self.n as i64) as usize
    }

    pub fn check_same(self, other: GroupParams) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ParamMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    pub fn point(self, x: i64, omega: i64) -> PhasePoint {
        PhasePoint {
            params: self,
            x: self.residue(x),
            omega: self.residue(omega),
        }
    }

    pub fn origin(self) -> PhasePoint {
        self.point(0, 0)
    }

    /// Point with row-major index `i = x * N + omega`.
    pub fn point_at(self, index: usize) -> PhasePoint {
        debug_assert!(index < self.dim());
        PhasePoint {
            params: self,
            x: index / self.n,
            omega: index % self.n,
        }
    }

    /// All points in row-major order (`x` outer, `omega` inner).
    pub fn points(self) -> impl Iterator<Item = PhasePoint> + Clone {
        (0..self.dim()).map(move |i| self.point_at(i))
    }
}

/// A point `z = (x, omega)` of `Z_N x Z_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhasePoint {
    params: GroupParams,
    x: usize,
    omega: usize,
}

impl PhasePoint {
    #[inline]
    pub fn x(self) -> usize {
        self.x
    }

    #[inline]
    pub fn omega(self) -> usize {
        self.omega
    }

    #[inline]
    pub fn params(self) -> GroupParams {
        self.params
    }

    /// Row-major index `x * N + omega`.
    #[inline]
    pub fn index(self) -> usize {
        self.x * self.params.n + self.omega
    }

    pub fn is_origin(self) -> bool {
        self.x == 0 && self.omega == 0
    }
}

impl Add for PhasePoint {
    type Output = PhasePoint;

    fn add(self, rhs: PhasePoint) -> PhasePoint {
        assert_eq!(self.params, rhs.params, "phase points from different groups");
        let n = self.params.n;
        PhasePoint {
            params: self.params,
            x: (self.x + rhs.x) % n,
            omega: (self.omega + rhs.omega) % n,
        }
    }
}

impl Neg for PhasePoint {
    type Output = PhasePoint;

    fn neg(self) -> PhasePoint {
        let n = self.params.n;
        PhasePoint {
            params: self.params,
            x: (n - self.x) % n,
            omega: (n - self.omega) % n,
        }
    }
}

impl Sub for PhasePoint {
    type Output = PhasePoint;

    fn sub(self, rhs: PhasePoint) -> PhasePoint {
        self + (-rhs)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for PhasePoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("PhasePoint", 2)?;
        s.serialize_field("x", &self.x)?;
        s.serialize_field("omega", &self.omega)?;
        s.end()
    }
}

/// `sigma(z, z') = omega * x' - omega' * x  (mod N)`.
pub fn symplectic_form(z: PhasePoint, w: PhasePoint) -> Result<usize> {
    z.params.check_same(w.params)?;
    Ok(symplectic_residue(z, w))
}

#[inline]
pub(crate) fn symplectic_residue(z: PhasePoint, w: PhasePoint) -> usize {
    let n = z.params.n as u64;
    let a = (z.omega as u64 * w.x as u64) % n;
    let b = (w.omega as u64 * z.x as u64) % n;
    ((a + n - b) % n) as usize
}

/// Exponent `k` with `half_phase(z) = exp(2 pi i k / N)`, i.e. `k = 2bar x omega mod N`.
#[inline]
pub(crate) fn half_phase_residue(z: PhasePoint) -> usize {
    let n = z.params.n as u64;
    let h = z.params.half() as u64;
    ((h * z.x as u64 % n) * z.omega as u64 % n) as usize
}

/// Discrete stand-in for `exp(pi i x omega)`: `exp(2 pi i 2bar x omega / N)`.
///
/// Squares to `exp(2 pi i x omega / N)`.
pub fn half_phase(z: PhasePoint) -> Complex64 {
    let n = z.params.n;
    let theta = 2.0 * core::f64::consts::PI * half_phase_residue(z) as f64 / n as f64;
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// A complex function on `Z_N x Z_N`, stored row-major (`x` outer).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFunction {
    params: GroupParams,
    values: Vec<Complex64>,
}

impl PhaseFunction {
    pub fn new(params: GroupParams, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != params.dim() {
            return Err(Error::DimensionMismatch {
                expected: params.dim(),
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { params, values })
    }

    pub fn zeros(params: GroupParams) -> Self {
        Self::constant(params, Complex64::new(0.0, 0.0))
    }

    pub fn constant(params: GroupParams, c: Complex64) -> Self {
        Self {
            params,
            values: vec![c; params.dim()],
        }
    }

    /// The indicator of a single point (value 1 at `z`, 0 elsewhere).
    pub fn delta(z: PhasePoint) -> Self {
        let mut f = Self::zeros(z.params);
        f.values[z.index()] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn from_fn(params: GroupParams, mut f: impl FnMut(PhasePoint) -> Complex64) -> Self {
        Self {
            params,
            values: params.points().map(&mut f).collect(),
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

    #[inline]
    pub fn at(&self, x: usize, omega: usize) -> Complex64 {
        self.values[x * self.params.n + omega]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            params: self.params,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.params.check_same(other.params)?;
        Ok(Self {
            params: self.params,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// `f_check(z) = f(-z)`.
    pub fn reflect(&self) -> Self {
        Self::from_fn(self.params, |z| self[-z])
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    /// Pointwise product.
    pub fn pointwise(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// `||f||_{L^p(nu)}` for `p` in `[1, inf]`.
    pub fn norm_lp(&self, p: f64) -> Result<f64> {
        lp_norm(&self.values, p, 1.0 / self.params.n as f64)
    }

    /// `<f, g>_{L^2(nu)} = (1/N) sum_z f(z) conj(g(z))`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.params.check_same(other.params)?;
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(s / self.params.n as f64)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| f64::max(m, v.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.params.check_same(other.params)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).norm())))
    }

    /// Group convolution with the phase-space measure,
    /// `(f * g)(z) = (1/N) sum_{z'} f(z - z') g(z')`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.params.check_same(other.params)?;
        let params = self.params;
        let scale = 1.0 / params.n as f64;
        Ok(Self::from_fn(params, |z| {
            params.points().map(|w| self[z - w] * other[w]).sum::<Complex64>() * scale
        }))
    }
}

impl Index<PhasePoint> for PhaseFunction {
    type Output = Complex64;

    #[inline]
    fn index(&self, z: PhasePoint) -> &Complex64 {
        debug_assert_eq!(z.params, self.params);
        &self.values[z.index()]
    }
}

impl Add for &PhaseFunction {
    type Output = PhaseFunction;

    fn add(self, rhs: &PhaseFunction) -> PhaseFunction {
        self.zip_with(rhs, |a, b| a + b).expect("phase functions from different groups")
    }
}

impl Sub for &PhaseFunction {
    type Output = PhaseFunction;

    fn sub(self, rhs: &PhaseFunction) -> PhaseFunction {
        self.zip_with(rhs, |a, b| a - b).expect("phase functions from different groups")
    }
}

impl Mul<Complex64> for &PhaseFunction {
    type Output = PhaseFunction;

    fn mul(self, c: Complex64) -> PhaseFunction {
        self.scale(c)
    }
}

/// Weighted `l^p` norm, `(w sum |v|^p)^{1/p}`, or `max |v|` for `p = inf`.
pub(crate) fn lp_norm(values: &[Complex64], p: f64, weight: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    if p.is_infinite() {
        return Ok(values.iter().fold(0.0, |m, v| f64::max(m, v.norm())));
    }
    let s: f64 = values.iter().map(|v| libm::pow(v.norm(), p)).sum();
    Ok(libm::pow(weight * s, 1.0 / p))
}

/// `(F_sigma f)(z) = (1/N) sum_{z'} f(z') exp(-2 pi i sigma(z, z') / N)`.
///
/// An involution and an isometry of `L^2(nu)`.
pub fn symplectic_fourier(f: &PhaseFunction) -> PhaseFunction {
    let params = f.params;
    let n = params.n;
    let roots = Roots::new(n);
    // inner[x'][x] = sum_{omega'} f(x', omega') exp(2 pi i omega' x / N)
    let inner: Vec<Vec<Complex64>> = (0..n)
        .map(|xp| dft_backward(&f.values[xp * n..(xp + 1) * n], &roots))
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); params.dim()];
    let scale = 1.0 / n as f64;
    for x in 0..n {
        let column: Vec<Complex64> = inner.iter().map(|row| row[x]).collect();
        for (omega, v) in dft_forward(&column, &roots).into_iter().enumerate() {
            out[x * n + omega] = v * scale;
        }
    }
    PhaseFunction { params, values: out }
}

/// `(T_z f)(z') = f(z' - z)`.
pub fn phase_translate(f: &PhaseFunction, z: PhasePoint) -> Result<PhaseFunction> {
    f.params.check_same(z.params)?;
    Ok(PhaseFunction::from_fn(f.params, |w| f[w - z]))
}

/// `integral f dnu = (1/N) sum_z f(z)`.
pub fn phase_integral(f: &PhaseFunction) -> Complex64 {
    f.values.iter().sum::<Complex64>() / f.params.n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pseudo_random(params: GroupParams, seed: u64) -> PhaseFunction {
        let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        PhaseFunction::from_fn(params, |_| c(next(), next()))
    }

    #[test]
    fn rejects_even_and_small_moduli() {
        assert_eq!(GroupParams::new(4), Err(Error::UnsupportedModulus(4)));
        assert_eq!(GroupParams::new(1), Err(Error::UnsupportedModulus(1)));
        assert!(GroupParams::new(3).is_ok());
    }

    #[test]
    fn symplectic_form_examples() {
        let g = GroupParams::new(5).unwrap();
        assert_eq!(symplectic_form(g.point(1, 0), g.point(0, 1)).unwrap(), 4);
        assert_eq!(symplectic_form(g.point(2, 3), g.point(4, 1)).unwrap(), 0);
        for z in g.points() {
            assert_eq!(symplectic_form(z, z).unwrap(), 0);
        }
        let h = GroupParams::new(7).unwrap();
        assert_eq!(
            symplectic_form(g.point(1, 1), h.point(1, 1)),
            Err(Error::ParamMismatch { left: 5, right: 7 })
        );
    }

    #[test]
    fn half_phase_examples() {
        let g = GroupParams::new(3).unwrap();
        assert_eq!(half_phase(g.point(0, 2)), c(1.0, 0.0));
        assert_eq!(half_phase(g.point(2, 0)), c(1.0, 0.0));
        let theta = 4.0 * core::f64::consts::PI / 3.0;
        assert!((half_phase(g.point(1, 1)) - c(theta.cos(), theta.sin())).norm() < 1e-15);
        for n in [3, 5, 9, 15] {
            let g = GroupParams::new(n).unwrap();
            for z in g.points() {
                let full = 2.0 * core::f64::consts::PI * ((z.x() * z.omega()) % n) as f64 / n as f64;
                let sq = half_phase(z) * half_phase(z);
                assert!((sq - c(full.cos(), full.sin())).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn symplectic_fourier_of_constant_is_scaled_delta() {
        for n in [3, 5, 7] {
            let g = GroupParams::new(n).unwrap();
            let f = symplectic_fourier(&PhaseFunction::constant(g, c(1.0, 0.0)));
            let expect = PhaseFunction::delta(g.origin()).scale(c(n as f64, 0.0));
            assert!(f.max_abs_diff(&expect).unwrap() < 1e-13);
            let back = symplectic_fourier(&expect);
            assert!(back.max_abs_diff(&PhaseFunction::constant(g, c(1.0, 0.0))).unwrap() < 1e-13);
        }
    }

    #[test]
    fn symplectic_fourier_matches_definition() {
        let g = GroupParams::new(5).unwrap();
        let f = pseudo_random(g, 3);
        let fast = symplectic_fourier(&f);
        for z in g.points() {
            let mut acc = c(0.0, 0.0);
            for w in g.points() {
                let theta = -2.0 * core::f64::consts::PI * symplectic_form(z, w).unwrap() as f64 / 5.0;
                acc += f[w] * c(theta.cos(), theta.sin());
            }
            assert!((fast[z] - acc / 5.0).norm() < 1e-13);
        }
    }

    #[test]
    fn symplectic_fourier_is_involutive_at_n9() {
        let g = GroupParams::new(9).unwrap();
        let f = pseudo_random(g, 11);
        let ff = symplectic_fourier(&symplectic_fourier(&f));
        assert!(ff.max_abs_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn translation_examples() {
        let g = GroupParams::new(5).unwrap();
        let f = pseudo_random(g, 5);
        assert_eq!(phase_translate(&f, g.origin()).unwrap(), f);
        let z = g.point(2, 4);
        assert_eq!(phase_translate(&PhaseFunction::delta(g.origin()), z).unwrap(), PhaseFunction::delta(z));
        let back = phase_translate(&phase_translate(&f, z).unwrap(), -z).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn integral_examples() {
        let g = GroupParams::new(7).unwrap();
        assert!((phase_integral(&PhaseFunction::constant(g, c(1.0, 0.0))) - c(7.0, 0.0)).norm() < 1e-14);
        assert!((phase_integral(&PhaseFunction::delta(g.point(3, 2))) - c(1.0 / 7.0, 0.0)).norm() < 1e-15);
        let f = pseudo_random(g, 1);
        let h = pseudo_random(g, 2);
        let (a, b) = (c(0.3, -1.2), c(2.0, 0.5));
        let lhs = phase_integral(&(&f.scale(a) + &h.scale(b)));
        let rhs = a * phase_integral(&f) + b * phase_integral(&h);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn lp_norms() {
        let g = GroupParams::new(3).unwrap();
        let one = PhaseFunction::constant(g, c(1.0, 0.0));
        assert!((one.norm_lp(1.0).unwrap() - 3.0).abs() < 1e-14);
        assert!((one.norm_lp(2.0).unwrap() - 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(one.norm_lp(f64::INFINITY).unwrap(), 1.0);
        assert_eq!(one.norm_lp(0.5), Err(Error::InvalidExponent(0.5)));
    }

    proptest! {
        #[test]
        fn parseval_and_translation_character(n in prop::sample::select(vec![3usize, 5, 7, 9, 11, 13, 15]),
                                              seed in any::<u64>(), zx in 0i64..15, zw in 0i64..15) {
            let g = GroupParams::new(n).unwrap();
            let f = pseudo_random(g, seed);
            let ff = symplectic_fourier(&f);
            prop_assert!((ff.norm_lp(2.0).unwrap() - f.norm_lp(2.0).unwrap()).abs() < 1e-12);

            let z = g.point(zx, zw);
            let lhs = symplectic_fourier(&phase_translate(&f, z).unwrap());
            let rhs = PhaseFunction::from_fn(g, |w| {
                let theta = 2.0 * core::f64::consts::PI * symplectic_form(z, w).unwrap() as f64 / n as f64;
                ff[w] * c(theta.cos(), theta.sin())
            });
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
        }

        #[test]
        fn symplectic_form_is_bilinear_and_antisymmetric(n in prop::sample::select(vec![3usize, 5, 9, 15]),
                                                         a in any::<[i64; 6]>()) {
            let g = GroupParams::new(n).unwrap();
            let (z, w, v) = (g.point(a[0], a[1]), g.point(a[2], a[3]), g.point(a[4], a[5]));
            let s = |p, q| symplectic_form(p, q).unwrap();
            prop_assert_eq!((s(z, w) + s(w, z)) % n, 0);
            prop_assert_eq!(s(z + v, w), (s(z, w) + s(v, w)) % n);
            prop_assert_eq!(s(z, w + v), (s(z, w) + s(z, v)) % n);
        }
    }
}

//! Localization operators and the Berezin transform.
//!
//! With windows `phi1, phi2` the localization operator with mask `f` is
//! `A_f psi = (1/N) sum_z f(z) V_phi1 psi(z) pi(z) phi2`, which coincides with
//! `f * (phi2 (x) phi1)`. The Berezin transform
//! `B T(z) = <T pi(z) phi1, pi(z) phi2>` coincides with
//! `T * (P phi1 (x) P phi2)`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dft::{dft_backward, Roots};
use crate::error::Result;
use crate::operator::{tf_shift, OperatorMatrix, Signal};
use crate::phase_space::{symplectic_fourier, PhaseFunction};
use crate::transforms::{ambiguity, fourier_wigner, stft};

/// Localization operator, assembled column by column from the STFT of each basis vector.
pub fn localization_operator(f: &PhaseFunction, phi1: &Signal, phi2: &Signal) -> Result<OperatorMatrix> {
    let params = f.params();
    params.check_same(phi1.params())?;
    params.check_same(phi2.params())?;
    let n = params.n();
    let roots = Roots::new(n);
    let window = phi2.values();
    let columns = (0..n)
        .map(|k| {
            let v = stft(&Signal::basis(params, k), phi1)?;
            let mut col = alloc::vec![Complex64::new(0.0, 0.0); n];
            // sum_z c(z) pi(z) phi2 (t) = sum_x phi2(t - x) sum_omega c(x, omega) exp(2 pi i omega t / N)
            let mut row = Vec::with_capacity(n);
            for x in 0..n {
                row.clear();
                row.extend((0..n).map(|omega| f.at(x, omega) * v.at(x, omega)));
                for (t, s) in dft_backward(&row, &roots).into_iter().enumerate() {
                    col[t] += window[(t + n - x) % n] * s;
                }
            }
            Ok(col)
        })
        .collect::<Result<Vec<_>>>()?;
    let scale = 1.0 / n as f64;
    Ok(OperatorMatrix::from_fn(params, |r, c| columns[c][r] * scale))
}

/// `B T(z) = <T pi(z) phi1, pi(z) phi2>`.
pub fn berezin_transform(t: &OperatorMatrix, phi1: &Signal, phi2: &Signal) -> Result<PhaseFunction> {
    let params = t.params();
    params.check_same(phi1.params())?;
    params.check_same(phi2.params())?;
    let values = params
        .points()
        .map(|z| {
            let a = t.apply(&tf_shift(phi1, z))?;
            a.inner(&tf_shift(phi2, z))
        })
        .collect::<Result<Vec<_>>>()?;
    PhaseFunction::new(params, values)
}

/// Twisted Weyl symbol of a localization operator together with the
/// residual against the transform of the assembled operator.
#[derive(Debug, Clone)]
pub struct TwistedSymbol {
    /// `F_sigma(f) * A(phi2, phi1)`.
    pub symbol: PhaseFunction,
    /// `max_z |symbol(z) - F_W(A_f)(z)|`.
    pub residual: f64,
}

pub fn locop_twisted_symbol(f: &PhaseFunction, phi1: &Signal, phi2: &Signal) -> Result<TwistedSymbol> {
    let symbol = symplectic_fourier(f).pointwise(&ambiguity(phi2, phi1)?)?;
    let direct = fourier_wigner(&localization_operator(f, phi1, phi2)?);
    let residual = symbol.max_abs_diff(&direct)?;
    Ok(TwistedSymbol { symbol, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::{build_conv_map, conv_fun_op, conv_op_op, ConvMapKind};
    use crate::operator::{parity_signal, rank_one, schatten_norm};
    use crate::phase_space::GroupParams;
    use crate::testutil::{random_function, random_operator, random_signal, rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matches_definition_term_by_term() {
        let g = GroupParams::new(5).unwrap();
        let mut r = rng(1);
        let (f, p1, p2) = (random_function(g, &mut r), random_signal(g, &mut r), random_signal(g, &mut r));
        let a = localization_operator(&f, &p1, &p2).unwrap();
        let psi = random_signal(g, &mut r);
        let v = stft(&psi, &p1).unwrap();
        let mut expect = Signal::zeros(g);
        for z in g.points() {
            expect = &expect + &tf_shift(&p2, z).scale(f[z] * v[z] / 5.0);
        }
        assert!(a.apply(&psi).unwrap().max_abs_diff(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn constant_and_zero_masks() {
        let g = GroupParams::new(7).unwrap();
        let mut r = rng(2);
        let (p1, p2) = (random_signal(g, &mut r), random_signal(g, &mut r));
        let a = localization_operator(&PhaseFunction::constant(g, c(1.0, 0.0)), &p1, &p2).unwrap();
        let expect = OperatorMatrix::identity(g).scale(p2.inner(&p1).unwrap());
        assert!(a.max_abs_diff(&expect).unwrap() < 1e-12);
        let a = localization_operator(&PhaseFunction::zeros(g), &p1, &p2).unwrap();
        assert_eq!(a.max_abs(), 0.0);
    }

    #[test]
    fn equals_convolution_with_rank_one() {
        for n in [3, 5, 9] {
            let g = GroupParams::new(n).unwrap();
            let mut r = rng(10 + n as u64);
            let (f, p1, p2) = (random_function(g, &mut r), random_signal(g, &mut r), random_signal(g, &mut r));
            let a = localization_operator(&f, &p1, &p2).unwrap();
            let b = conv_fun_op(&f, &rank_one(&p2, &p1).unwrap()).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
        }
    }

    #[test]
    fn berezin_examples() {
        let g = GroupParams::new(5).unwrap();
        let mut r = rng(3);
        let (p1, p2) = (random_signal(g, &mut r), random_signal(g, &mut r));
        let b = berezin_transform(&OperatorMatrix::identity(g), &p1, &p2).unwrap();
        let expect = PhaseFunction::constant(g, p1.inner(&p2).unwrap());
        assert!(b.max_abs_diff(&expect).unwrap() < 1e-12);

        let (psi, phi) = (random_signal(g, &mut r), random_signal(g, &mut r));
        let t = rank_one(&psi, &psi).unwrap();
        let b = berezin_transform(&t, &phi, &phi).unwrap();
        let v = stft(&psi, &phi).unwrap();
        for z in g.points() {
            assert!(b[z].re >= -1e-12 && b[z].im.abs() < 1e-12);
            assert!((b[z].re - v[z].norm_sqr()).abs() < 1e-11);
        }

        for _ in 0..3 {
            let t = random_operator(g, &mut r);
            let lhs = berezin_transform(&t, &p1, &p2).unwrap();
            let partner = rank_one(&parity_signal(&p1), &parity_signal(&p2)).unwrap();
            let rhs = conv_op_op(&t, &partner).unwrap();
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
        }
    }

    #[test]
    fn twisted_symbol_identity() {
        let g = GroupParams::new(7).unwrap();
        let mut r = rng(4);
        // Gaussian-like window on Z_7
        let gauss = Signal::from_fn(g, |t| {
            let d = t.min(7 - t) as f64;
            c((-core::f64::consts::PI * d * d / 7.0).exp(), 0.0)
        });
        let f = random_function(g, &mut r);
        let ts = locop_twisted_symbol(&f, &gauss, &tf_shift(&gauss, g.point(1, 2))).unwrap();
        assert!(ts.residual < 1e-12);

        let one = PhaseFunction::constant(g, c(1.0, 0.0));
        let (p1, p2) = (random_signal(g, &mut r), random_signal(g, &mut r));
        let ts = locop_twisted_symbol(&one, &p1, &p2).unwrap();
        let expect = fourier_wigner(&OperatorMatrix::identity(g).scale(p2.inner(&p1).unwrap()));
        assert!(ts.symbol.max_abs_diff(&expect).unwrap() < 1e-11);

        // windows whose ambiguity vanishes off x = 0
        let e0 = Signal::basis(g, 0);
        let ts = locop_twisted_symbol(&f, &e0, &e0).unwrap();
        for z in g.points().filter(|z| z.x() != 0) {
            assert!(ts.symbol[z].norm() < 1e-14);
        }
    }

    #[test]
    fn schatten_and_berezin_bounds() {
        let g = GroupParams::new(5).unwrap();
        let mut r = rng(5);
        for _ in 0..10 {
            let (f, p1, p2) = (random_function(g, &mut r), random_signal(g, &mut r), random_signal(g, &mut r));
            let a = localization_operator(&f, &p1, &p2).unwrap();
            let t = random_operator(g, &mut r);
            let b = berezin_transform(&t, &p1, &p2).unwrap();
            let w = p1.norm() * p2.norm();
            for p in [1.0, 2.0, f64::INFINITY] {
                assert!(schatten_norm(&a, p).unwrap() <= f.norm_lp(p).unwrap() * w * (1.0 + 1e-10));
                assert!(b.norm_lp(p).unwrap() <= schatten_norm(&t, p).unwrap() * w * (1.0 + 1e-10));
            }
        }
    }

    #[test]
    fn localization_berezin_duality() {
        let g = GroupParams::new(5).unwrap();
        let mut r = rng(6);
        let (p1, p2) = (random_signal(g, &mut r), random_signal(g, &mut r));
        let s = rank_one(&p2, &p1).unwrap();
        let b = build_conv_map(&s, ConvMapKind::OperatorToFunction).unwrap();
        let (t, f) = (random_operator(g, &mut r), random_function(g, &mut r));
        let bt = PhaseFunction::new(g, b.apply(t.entries()).unwrap()).unwrap();
        let lhs = bt.inner(&f).unwrap();
        let rhs = t.hs_inner(&localization_operator(&f, &p1, &p2).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
        // B_S for S = phi2 (x) phi1 is the Berezin transform with windows (phi1, phi2)
        let direct = berezin_transform(&t, &p1, &p2).unwrap();
        assert!(bt.max_abs_diff(&direct).unwrap() < 1e-12);
    }
}

//! Regularity and Tauberian diagnostics for operators on `l^2(Z_N)`.
//!
//! On a finite phase space every notion of `p`-regularity collapses to one
//! statement: `F_W S` has no zeros. The dimension counts are exact. Since
//! `F_W(alpha_z S)(z') = exp(2 pi i sigma(z, z') / N) F_W S(z')`, the span of
//! the translates `alpha_z S` is mapped by `F_W` onto all functions of the form
//! `g * F_W S`, whose dimension is the size of the support of `F_W S`.
//! Likewise `F_W(f * S) = F_sigma(f) F_W S`, so the kernel of `A_S` (and of
//! its adjoint `B_S`) has dimension equal to the number of zeros. Measure-zero
//! and dense-complement variants of these statements coincide with "empty
//! zero set", and weak* density coincides with norm density.

use alloc::vec::Vec;

use crate::convolution::{build_conv_map, ConvMapKind, DEFAULT_CONV_MAP_CAP};
use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{alpha_shift, rank_one, OperatorMatrix, Signal};
use crate::phase_space::{phase_translate, symplectic_fourier, PhaseFunction, PhasePoint};
use crate::transforms::{ambiguity, fourier_wigner};

/// Default relative threshold for zero-set membership.
pub const DEFAULT_ZERO_TOLERANCE: f64 = 1e-9;

/// Relative singular value cutoff for span and kernel ranks.
pub const SPAN_RANK_TOLERANCE: f64 = 1e-8;

fn check_tolerance(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

fn check_cap(dim: usize) -> Result<()> {
    if dim > DEFAULT_CONV_MAP_CAP {
        Err(Error::CapExceeded {
            size: dim,
            cap: DEFAULT_CONV_MAP_CAP,
        })
    } else {
        Ok(())
    }
}

/// Points where `|f(z)| <= tol * max |f|`. Every point when `f = 0`.
pub fn zero_set_of(f: &PhaseFunction, tol: f64) -> Result<Vec<PhasePoint>> {
    check_tolerance(tol)?;
    let threshold = tol * f.max_abs();
    Ok(f.params().points().filter(|&z| f[z].norm() <= threshold).collect())
}

/// Zeros of `F_W S` relative to its maximum modulus.
pub fn zero_set(s: &OperatorMatrix, tol: f64) -> Result<Vec<PhasePoint>> {
    zero_set_of(&fourier_wigner(s), tol)
}

/// Rank of the family `{alpha_z S}` inside the `N^2`-dimensional operator space.
pub fn translate_span_rank(s: &OperatorMatrix) -> Result<usize> {
    let params = s.params();
    let d = params.dim();
    check_cap(d)?;
    // one row per translate; rank is unaffected by transposition
    let mut rows = Vec::with_capacity(d * d);
    for z in params.points() {
        rows.extend_from_slice(alpha_shift(s, z)?.entries());
    }
    Ok(linalg::matrix_rank(&rows, d, d, SPAN_RANK_TOLERANCE))
}

/// Rank of the family `{T_z f}` of ordinary translates of a phase-space function.
///
/// Equals the support size of `F_sigma f` (Wiener's theorem on `Z_N x Z_N`).
pub fn function_translate_rank(f: &PhaseFunction) -> Result<usize> {
    let params = f.params();
    let d = params.dim();
    check_cap(d)?;
    let mut rows = Vec::with_capacity(d * d);
    for z in params.points() {
        rows.extend_from_slice(phase_translate(f, z)?.values());
    }
    Ok(linalg::matrix_rank(&rows, d, d, SPAN_RANK_TOLERANCE))
}

/// Support of `z -> F_W S(-z)` above the relative threshold.
pub fn arveson_spectrum(s: &OperatorMatrix, tol: f64) -> Result<Vec<PhasePoint>> {
    check_tolerance(tol)?;
    let fw = fourier_wigner(s);
    let threshold = tol * fw.max_abs();
    Ok(s.params().points().filter(|&z| fw[-z].norm() > threshold).collect())
}

/// Zero set, translate rank, kernel dimensions and spectrum of one operator.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RegularityReport {
    pub n: usize,
    pub zero_set: Vec<PhasePoint>,
    pub support_size: usize,
    pub translate_rank: usize,
    #[cfg_attr(feature = "serde", serde(rename = "kernel_dim_A"))]
    pub kernel_dim_a: usize,
    #[cfg_attr(feature = "serde", serde(rename = "kernel_dim_B"))]
    pub kernel_dim_b: usize,
    pub regular: bool,
    /// `S = 0`: every point is a zero.
    pub degenerate: bool,
    pub arveson_support: Vec<PhasePoint>,
    /// `translate_rank = N^2 - |zero_set|` and both kernel dimensions equal `|zero_set|`.
    pub tauberian_identity_holds: bool,
}

pub fn regularity_report(s: &OperatorMatrix, tol: f64) -> Result<RegularityReport> {
    let params = s.params();
    let d = params.dim();
    check_cap(d)?;
    let zeros = zero_set(s, tol)?;
    let support_size = d - zeros.len();
    let translate_rank = translate_span_rank(s)?;
    let kernel_dim_a = build_conv_map(s, ConvMapKind::FunctionToOperator)?.kernel_dim(SPAN_RANK_TOLERANCE);
    let kernel_dim_b = build_conv_map(s, ConvMapKind::OperatorToFunction)?.kernel_dim(SPAN_RANK_TOLERANCE);
    let arveson_support = arveson_spectrum(s, tol)?;
    let tauberian_identity_holds =
        translate_rank == support_size && kernel_dim_a == zeros.len() && kernel_dim_b == zeros.len();
    Ok(RegularityReport {
        n: params.n(),
        regular: zeros.is_empty(),
        degenerate: s.max_abs() == 0.0,
        zero_set: zeros,
        support_size,
        translate_rank,
        kernel_dim_a,
        kernel_dim_b,
        arveson_support,
        tauberian_identity_holds,
    })
}

/// Density verdict for localization operators with windows `(phi1, phi2)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DensityReport {
    /// Report for `S = phi2 (x) phi1`; `regular` is the density verdict.
    pub report: RegularityReport,
    pub ambiguity_zero_set: Vec<PhasePoint>,
    /// Zero set of `F_W S` equals the zero set of `A(phi2, phi1)`.
    pub zero_sets_agree: bool,
}

pub fn localization_density_check(phi1: &Signal, phi2: &Signal, tol: f64) -> Result<DensityReport> {
    let s = rank_one(phi2, phi1)?;
    let report = regularity_report(&s, tol)?;
    let ambiguity_zero_set = zero_set_of(&ambiguity(phi2, phi1)?, tol)?;
    let zero_sets_agree = ambiguity_zero_set == report.zero_set;
    Ok(DensityReport {
        report,
        ambiguity_zero_set,
        zero_sets_agree,
    })
}

/// Operator whose Fourier-Wigner transform is `values` on `support` and zero elsewhere.
pub fn operator_with_support(
    params: crate::phase_space::GroupParams,
    support: &[PhasePoint],
    mut values: impl FnMut(PhasePoint) -> num_complex::Complex64,
) -> OperatorMatrix {
    let mut f = PhaseFunction::zeros(params);
    let mut symbol = f.clone().into_values();
    for &z in support {
        symbol[z.index()] = values(z);
    }
    f = PhaseFunction::new(params, symbol).expect("finite symbol");
    crate::transforms::rho(&f)
}

/// `F_sigma(S * S) = (F_W S)^2`, so `S * S` has the same zeros as `F_W S`.
pub fn self_convolution_zero_set(s: &OperatorMatrix, tol: f64) -> Result<Vec<PhasePoint>> {
    let ss = crate::convolution::conv_op_op(s, s)?;
    zero_set_of(&symplectic_fourier(&ss), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::tf_shift_matrix;
    use crate::phase_space::GroupParams;
    use crate::testutil::{gaussian, random_function, random_operator, random_signal, rng};
    use num_complex::Complex64;

    fn grp(n: usize) -> GroupParams {
        GroupParams::new(n).unwrap()
    }

    fn e0(g: GroupParams) -> OperatorMatrix {
        rank_one(&Signal::basis(g, 0), &Signal::basis(g, 0)).unwrap()
    }

    #[test]
    fn zero_set_examples() {
        let g = grp(5);
        let zs = zero_set(&e0(g), DEFAULT_ZERO_TOLERANCE).unwrap();
        assert_eq!(zs.len(), 20);
        assert!(zs.iter().all(|z| z.x() != 0));
        let zs = zero_set(&OperatorMatrix::identity(g), DEFAULT_ZERO_TOLERANCE).unwrap();
        assert_eq!(zs.len(), 24);
        assert!(!zs.contains(&g.origin()));
        let z0 = g.point(2, 3);
        let zs = zero_set(&tf_shift_matrix(z0), DEFAULT_ZERO_TOLERANCE).unwrap();
        assert_eq!(zs.len(), 24);
        // F_W pi(z0) is supported at z0
        assert!(!zs.contains(&z0));
        assert_eq!(zero_set(&OperatorMatrix::zeros(g), 1e-9).unwrap().len(), 25);
        assert_eq!(zero_set(&e0(g), 0.0), Err(Error::InvalidTolerance(0.0)));
        assert_eq!(zero_set(&e0(g), 1.0), Err(Error::InvalidTolerance(1.0)));
    }

    #[test]
    fn translate_rank_examples() {
        let g = grp(5);
        assert_eq!(translate_span_rank(&OperatorMatrix::identity(g)).unwrap(), 1);
        assert_eq!(translate_span_rank(&e0(g)).unwrap(), 5);
        let s = random_operator(g, &mut rng(1));
        assert!(zero_set(&s, DEFAULT_ZERO_TOLERANCE).unwrap().is_empty());
        assert_eq!(translate_span_rank(&s).unwrap(), 25);
    }

    #[test]
    fn regularity_report_examples() {
        let g = grp(5);
        let rep = regularity_report(&e0(g), DEFAULT_ZERO_TOLERANCE).unwrap();
        assert_eq!((rep.translate_rank, rep.kernel_dim_a, rep.kernel_dim_b), (5, 20, 20));
        assert!(!rep.regular && rep.tauberian_identity_holds && !rep.degenerate);
        assert_eq!(rep.support_size + rep.zero_set.len(), 25);

        let rep = regularity_report(&random_operator(g, &mut rng(2)), DEFAULT_ZERO_TOLERANCE).unwrap();
        assert_eq!((rep.translate_rank, rep.kernel_dim_a, rep.kernel_dim_b), (25, 0, 0));
        assert!(rep.regular && rep.tauberian_identity_holds);
        assert_eq!(rep.arveson_support.len(), 25);

        let rep = regularity_report(&OperatorMatrix::zeros(g), DEFAULT_ZERO_TOLERANCE).unwrap();
        assert_eq!((rep.translate_rank, rep.kernel_dim_a, rep.kernel_dim_b), (0, 25, 25));
        assert!(rep.degenerate && !rep.regular && rep.tauberian_identity_holds);
    }

    #[test]
    fn arveson_examples() {
        let g = grp(7);
        assert_eq!(arveson_spectrum(&OperatorMatrix::identity(g), 1e-9).unwrap(), alloc::vec![g.origin()]);
        let sp = arveson_spectrum(&e0(g), 1e-9).unwrap();
        assert_eq!(sp.len(), 7);
        assert!(sp.iter().all(|z| z.x() == 0));
        let s = random_operator(g, &mut rng(3));
        assert_eq!(arveson_spectrum(&s, 1e-9).unwrap().len(), 49);
        // spectrum is the reflected support of F_W S
        let z0 = g.point(1, 4);
        assert_eq!(arveson_spectrum(&tf_shift_matrix(z0), 1e-9).unwrap(), alloc::vec![-z0]);
    }

    #[test]
    fn crafted_supports_follow_the_rank_law() {
        let g = grp(5);
        let mut r = rng(4);
        for k in [0usize, 1, 5, 24] {
            let support: Vec<PhasePoint> = g.points().skip(k).collect();
            // moduli bounded away from zero on the support
            let s = operator_with_support(g, &support, |_| {
                let v = gaussian(&mut r);
                v / v.norm() * (1.0 + v.norm())
            });
            let rep = regularity_report(&s, DEFAULT_ZERO_TOLERANCE).unwrap();
            assert_eq!(rep.zero_set.len(), k);
            assert_eq!(rep.translate_rank, 25 - k);
            assert_eq!(rep.kernel_dim_a, k);
            assert_eq!(rep.kernel_dim_b, k);
            assert!(rep.tauberian_identity_holds);
            assert_eq!(self_convolution_zero_set(&s, DEFAULT_ZERO_TOLERANCE).unwrap(), rep.zero_set);
        }
    }

    #[test]
    fn wiener_on_phase_space() {
        let g = grp(5);
        let mut f = random_function(g, &mut rng(5));
        assert_eq!(function_translate_rank(&f).unwrap(), 25);
        // kill three Fourier coefficients
        let mut hat = symplectic_fourier(&f).into_values();
        for i in [0, 7, 13] {
            hat[i] = Complex64::new(0.0, 0.0);
        }
        f = symplectic_fourier(&PhaseFunction::new(g, hat).unwrap());
        assert_eq!(function_translate_rank(&f).unwrap(), 22);
    }

    #[test]
    fn density_check_examples() {
        let g = grp(5);
        let e = Signal::basis(g, 0);
        let d = localization_density_check(&e, &e, DEFAULT_ZERO_TOLERANCE).unwrap();
        assert!(!d.report.regular && d.zero_sets_agree);
        assert_eq!(d.report.zero_set.len(), 20);

        let mut r = rng(6);
        let (p1, p2) = (random_signal(g, &mut r), random_signal(g, &mut r));
        let d = localization_density_check(&p1, &p2, DEFAULT_ZERO_TOLERANCE).unwrap();
        assert!(d.ambiguity_zero_set.is_empty());
        assert!(d.report.regular && d.zero_sets_agree);

        let d = localization_density_check(&p1, &Signal::zeros(g), DEFAULT_ZERO_TOLERANCE).unwrap();
        assert!(d.report.degenerate && !d.report.regular);
    }
}

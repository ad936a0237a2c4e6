//! Finite-model identity checks.
//!
//! Each check draws `count` random instances at one modulus and returns the
//! worst measured quantity: a relative error (absolute error divided by the
//! natural scale of the identity, never below one machine-independent unit
//! for scale-free quantities), a norm ratio, or an integer mismatch count.

use num_complex::Complex64;
use qha_core::convolution::{build_conv_map, conv_fun_fun, conv_fun_op, conv_op_op, ConvMapKind};
use qha_core::localization::{berezin_transform, localization_operator, locop_twisted_symbol};
use qha_core::operator::{alpha_shift, parity_conjugate, rank_one, schatten_norm, tf_shift_matrix, trace};
use qha_core::phase_space::{half_phase, phase_integral, phase_translate, symplectic_fourier};
use qha_core::tauberian::{regularity_report, RegularityReport, DEFAULT_ZERO_TOLERANCE};
use qha_core::transforms::{fourier_wigner, rho, stft, twisted_convolution};
use qha_core::{parity_signal, GroupParams, OperatorMatrix, PhaseFunction, Signal};
use serde::Serialize;

use crate::ensembles::{
    crafted_operator, random_function, random_operator, random_point, random_signal, SuiteRng,
};

fn relative(error: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        error / scale
    } else {
        error
    }
}

fn op_err(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
    relative(a.max_abs_diff(b).expect("same group"), b.max_abs().max(a.max_abs()))
}

fn fun_err(a: &PhaseFunction, b: &PhaseFunction) -> f64 {
    relative(a.max_abs_diff(b).expect("same group"), b.max_abs().max(a.max_abs()))
}

fn tn(a: &OperatorMatrix, p: f64) -> f64 {
    schatten_norm(a, p).expect("valid exponent")
}

fn ln(f: &PhaseFunction, p: f64) -> f64 {
    f.norm_lp(p).expect("valid exponent")
}

/// `(1/N) sum_z V_phi1 psi1 conj(V_phi2 psi2) = <psi1, psi2> conj(<phi1, phi2>)`,
/// error relative to `||psi1|| ||phi1|| ||psi2|| ||phi2||`.
pub fn moyal(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let [psi1, phi1, psi2, phi2] = [(); 4].map(|_| random_signal(params, rng));
            let lhs = stft(&psi1, &phi1)
                .and_then(|a| a.inner(&stft(&psi2, &phi2)?))
                .expect("same group");
            let rhs = psi1.inner(&psi2).unwrap() * phi1.inner(&phi2).unwrap().conj();
            relative((lhs - rhs).norm(), psi1.norm() * phi1.norm() * psi2.norm() * phi2.norm())
        })
        .fold(0.0, f64::max)
}

/// `integral S * T dnu = tr(S) tr(T)`, error relative to
/// `max(|tr S tr T|, ||S||_{T^2} ||T||_{T^2})`.
pub fn trace_integral(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let (s, t) = (random_operator(params, rng), random_operator(params, rng));
            let lhs = phase_integral(&conv_op_op(&s, &t).unwrap());
            let rhs = trace(&s) * trace(&t);
            relative((lhs - rhs).norm(), rhs.norm().max(s.frobenius_norm() * t.frobenius_norm()))
        })
        .fold(0.0, f64::max)
}

/// `| ||F_W S||_{L^2} - ||S||_{T^2} | / ||S||_{T^2}`.
pub fn fw_unitarity(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let s = random_operator(params, rng);
            let hs = s.frobenius_norm();
            relative((ln(&fourier_wigner(&s), 2.0) - hs).abs(), hs)
        })
        .fold(0.0, f64::max)
}

/// `rho(F_W S) = S` and `F_W(rho f) = f`, worst relative max error.
pub fn rho_inverse(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let s = random_operator(params, rng);
            let f = random_function(params, rng);
            op_err(&rho(&fourier_wigner(&s)), &s).max(fun_err(&fourier_wigner(&rho(&f)), &f))
        })
        .fold(0.0, f64::max)
}

/// Half-phase exponents of one candidate convention: `F_W S(z) = h(z)^a tr(pi(-z) S)`
/// and `rho f = (1/N) sum_z f(z) h(z)^b pi(z)`, with `a, b` in `{+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Convention {
    pub transform_sign: i8,
    pub inverse_sign: i8,
}

/// The convention implemented by [`fourier_wigner`] and [`rho`].
pub const IMPLEMENTED_CONVENTION: Convention = Convention {
    transform_sign: -1,
    inverse_sign: -1,
};

fn phase_power(z: qha_core::PhasePoint, sign: i8) -> Complex64 {
    let h = half_phase(z);
    if sign > 0 {
        h
    } else {
        h.conj()
    }
}

fn candidate_transform(s: &OperatorMatrix, sign: i8) -> PhaseFunction {
    let params = s.params();
    PhaseFunction::from_fn(params, |z| {
        phase_power(z, sign) * qha_core::trace_product(&tf_shift_matrix(-z), s).expect("same group")
    })
}

fn candidate_inverse(f: &PhaseFunction, sign: i8) -> OperatorMatrix {
    let params = f.params();
    let mut acc = OperatorMatrix::zeros(params);
    for z in params.points() {
        let coeff = f[z] * phase_power(z, sign) / params.n() as f64;
        acc = &acc + &tf_shift_matrix(z).scale(coeff);
    }
    acc
}

/// Worst residual of one candidate convention against the defining
/// properties: mutual inverses, and `rho(f # g) = rho(f) rho(g)` for the
/// twisted convolution `#`. Built only from `pi(z)`, the half phase and traces.
pub fn convention_residual(params: GroupParams, convention: Convention, rng: &mut SuiteRng) -> f64 {
    let (s, f, g) = (
        random_operator(params, rng),
        random_function(params, rng),
        random_function(params, rng),
    );
    let fw = |a: &OperatorMatrix| candidate_transform(a, convention.transform_sign);
    let inv = |h: &PhaseFunction| candidate_inverse(h, convention.inverse_sign);
    let a = op_err(&inv(&fw(&s)), &s);
    let b = fun_err(&fw(&inv(&f)), &f);
    let product = inv(&f).matmul(&inv(&g)).unwrap();
    let c = op_err(&inv(&twisted_convolution(&f, &g).unwrap()), &product);
    a.max(b).max(c)
}

/// Conventions whose residual is below `tol`, among all four sign choices.
pub fn sign_convention_oracle(params: GroupParams, tol: f64, rng: &mut SuiteRng) -> Vec<Convention> {
    let mut winners = Vec::new();
    for transform_sign in [1, -1] {
        for inverse_sign in [1, -1] {
            let convention = Convention {
                transform_sign,
                inverse_sign,
            };
            if convention_residual(params, convention, rng) < tol {
                winners.push(convention);
            }
        }
    }
    winners
}

/// Worst relative errors of the four product formulas.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ProductErrors {
    /// `F_sigma(S * T) = F_W S F_W T`.
    pub operator_convolution: f64,
    /// `F_W(f * S) = F_sigma f F_W S`.
    pub mixed_convolution: f64,
    /// `F_W(S T) = F_W S # F_W T`.
    pub operator_product: f64,
    /// `rho(f # g) = rho(f) rho(g)`.
    pub twisted_product: f64,
}

impl ProductErrors {
    pub fn max(&self) -> f64 {
        self.operator_convolution
            .max(self.mixed_convolution)
            .max(self.operator_product)
            .max(self.twisted_product)
    }
}

pub fn product_formulas(params: GroupParams, count: usize, rng: &mut SuiteRng) -> ProductErrors {
    let mut worst = ProductErrors::default();
    for _ in 0..count {
        let (s, t) = (random_operator(params, rng), random_operator(params, rng));
        let (f, g) = (random_function(params, rng), random_function(params, rng));
        let (fs, ft) = (fourier_wigner(&s), fourier_wigner(&t));
        let e1 = fun_err(&symplectic_fourier(&conv_op_op(&s, &t).unwrap()), &fs.pointwise(&ft).unwrap());
        let e2 = fun_err(
            &fourier_wigner(&conv_fun_op(&f, &s).unwrap()),
            &symplectic_fourier(&f).pointwise(&fs).unwrap(),
        );
        let e3 = fun_err(
            &fourier_wigner(&s.matmul(&t).unwrap()),
            &twisted_convolution(&fs, &ft).unwrap(),
        );
        let e4 = op_err(
            &rho(&twisted_convolution(&f, &g).unwrap()),
            &rho(&f).matmul(&rho(&g)).unwrap(),
        );
        worst.operator_convolution = worst.operator_convolution.max(e1);
        worst.mixed_convolution = worst.mixed_convolution.max(e2);
        worst.operator_product = worst.operator_product.max(e3);
        worst.twisted_product = worst.twisted_product.max(e4);
    }
    worst
}

/// `S * T = T * S`.
pub fn commutativity(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let (s, t) = (random_operator(params, rng), random_operator(params, rng));
            fun_err(&conv_op_op(&s, &t).unwrap(), &conv_op_op(&t, &s).unwrap())
        })
        .fold(0.0, f64::max)
}

/// `(f * g) * S = f * (g * S)`, `(f * S) * T = f * (S * T)` and
/// `(S * T) * U = S * (T * U)` with `(S * T) * U` an operator.
pub fn associativity(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let (f, g) = (random_function(params, rng), random_function(params, rng));
            let [s, t, u] = [(); 3].map(|_| random_operator(params, rng));
            let a = op_err(
                &conv_fun_op(&conv_fun_fun(&f, &g).unwrap(), &s).unwrap(),
                &conv_fun_op(&f, &conv_fun_op(&g, &s).unwrap()).unwrap(),
            );
            let b = fun_err(
                &conv_op_op(&conv_fun_op(&f, &s).unwrap(), &t).unwrap(),
                &conv_fun_fun(&f, &conv_op_op(&s, &t).unwrap()).unwrap(),
            );
            let c = op_err(
                &conv_fun_op(&conv_op_op(&s, &t).unwrap(), &u).unwrap(),
                &conv_fun_op(&conv_op_op(&t, &u).unwrap(), &s).unwrap(),
            );
            a.max(b).max(c)
        })
        .fold(0.0, f64::max)
}

/// `(f * S)^* = conj(f) * S^*`, `(f * S)check = fcheck * Scheck`,
/// `conj(S * T) = S^* * T^*`, `alpha_z(f * S) = (T_z f) * S`,
/// `T_z(S * T) = (alpha_z S) * T`.
pub fn tidbits(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let f = random_function(params, rng);
            let (s, t) = (random_operator(params, rng), random_operator(params, rng));
            let z = random_point(params, rng);
            let fs = conv_fun_op(&f, &s).unwrap();
            let st = conv_op_op(&s, &t).unwrap();
            [
                op_err(&fs.adjoint(), &conv_fun_op(&f.conj(), &s.adjoint()).unwrap()),
                op_err(&parity_conjugate(&fs), &conv_fun_op(&f.reflect(), &parity_conjugate(&s)).unwrap()),
                fun_err(&st.conj(), &conv_op_op(&s.adjoint(), &t.adjoint()).unwrap()),
                op_err(
                    &alpha_shift(&fs, z).unwrap(),
                    &conv_fun_op(&phase_translate(&f, z).unwrap(), &s).unwrap(),
                ),
                fun_err(
                    &phase_translate(&st, z).unwrap(),
                    &conv_op_op(&alpha_shift(&s, z).unwrap(), &t).unwrap(),
                ),
            ]
            .into_iter()
            .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Exponent triples `(p, q, r)` of `||S * T||_{L^r} <= ||S||_{T^p} ||T||_{T^q}`.
pub const YOUNG_TABLE: [(f64, f64, f64); 4] = [
    (1.0, 1.0, 1.0),
    (1.0, 2.0, 2.0),
    (2.0, 2.0, f64::INFINITY),
    (1.0, f64::INFINITY, f64::INFINITY),
];

/// Worst ratio `||S * T||_{L^r} / (||S||_{T^p} ||T||_{T^q})` over [`YOUNG_TABLE`],
/// together with `||f * S||_{T^1} / (||f||_{L^1} ||S||_{T^1})`.
pub fn young_bounds(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let (s, t) = (random_operator(params, rng), random_operator(params, rng));
            let f = random_function(params, rng);
            let st = conv_op_op(&s, &t).unwrap();
            let fs = conv_fun_op(&f, &s).unwrap();
            YOUNG_TABLE
                .iter()
                .map(|&(p, q, r)| ln(&st, r) / (tn(&s, p) * tn(&t, q)))
                .fold(tn(&fs, 1.0) / (ln(&f, 1.0) * tn(&s, 1.0)), f64::max)
        })
        .fold(0.0, f64::max)
}

/// `<B_S T, f>_{L^2(nu)} = <T, A_S f>_{HS}` through the materialized maps.
pub fn adjoint_pairing(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..count.div_ceil(5) {
        let s = random_operator(params, rng);
        let a = build_conv_map(&s, ConvMapKind::FunctionToOperator).unwrap();
        let b = build_conv_map(&s, ConvMapKind::OperatorToFunction).unwrap();
        for _ in 0..5 {
            let (t, f) = (random_operator(params, rng), random_function(params, rng));
            let bt = PhaseFunction::new(params, b.apply(t.entries()).unwrap()).unwrap();
            let af = OperatorMatrix::new(params, a.apply(f.values()).unwrap()).unwrap();
            let lhs = bt.inner(&f).unwrap();
            let rhs = t.hs_inner(&af).unwrap();
            let scale = t.frobenius_norm() * ln(&f, 2.0) * s.frobenius_norm();
            worst = worst.max(relative((lhs - rhs).norm(), scale));
        }
    }
    worst
}

/// Conjugate exponents used by the Hausdorff-Young checks.
pub const HAUSDORFF_YOUNG_EXPONENTS: [f64; 3] = [1.0, 4.0 / 3.0, 2.0];

fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

/// Worst `||F_W S||_{L^q} / ||S||_{T^p}` over [`HAUSDORFF_YOUNG_EXPONENTS`].
pub fn hausdorff_young(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let s = random_operator(params, rng);
            let fs = fourier_wigner(&s);
            HAUSDORFF_YOUNG_EXPONENTS
                .iter()
                .map(|&p| ln(&fs, conjugate(p)) / tn(&s, p))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Equality cases: `p = 2` on random `S`, and `p = 1` for `S = pi(z0)`.
pub fn hausdorff_young_equality(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let s = random_operator(params, rng);
            let two = (ln(&fourier_wigner(&s), 2.0) / tn(&s, 2.0) - 1.0).abs();
            let shift = tf_shift_matrix(random_point(params, rng));
            let one = (ln(&fourier_wigner(&shift), f64::INFINITY) / tn(&shift, 1.0) - 1.0).abs();
            two.max(one)
        })
        .fold(0.0, f64::max)
}

/// Localization operators and Berezin transforms by their defining formulas
/// against the convolution route `f * (phi2 (x) phi1)` and `T * (P phi1 (x) P phi2)`.
pub fn localization_equivalence(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let (phi1, phi2) = (random_signal(params, rng), random_signal(params, rng));
            let f = random_function(params, rng);
            let t = random_operator(params, rng);
            let direct = localization_operator(&f, &phi1, &phi2).unwrap();
            let via = conv_fun_op(&f, &rank_one(&phi2, &phi1).unwrap()).unwrap();
            let by_definition = superposition_locop(&f, &phi1, &phi2);
            let berezin = berezin_transform(&t, &phi1, &phi2).unwrap();
            let window = rank_one(&parity_signal(&phi1), &parity_signal(&phi2)).unwrap();
            let berezin_via = conv_op_op(&t, &window).unwrap();
            op_err(&direct, &via)
                .max(op_err(&by_definition, &via))
                .max(fun_err(&berezin, &berezin_via))
        })
        .fold(0.0, f64::max)
}

/// `A_f = (1/N) sum_z f(z) (pi(z) phi2) (x) (pi(z) phi1)`, term by term.
fn superposition_locop(f: &PhaseFunction, phi1: &Signal, phi2: &Signal) -> OperatorMatrix {
    let params = f.params();
    let mut acc = OperatorMatrix::zeros(params);
    for z in params.points() {
        let term = rank_one(&qha_core::tf_shift(phi2, z), &qha_core::tf_shift(phi1, z)).unwrap();
        acc = &acc + &term.scale(f[z] / params.n() as f64);
    }
    acc
}

/// `F_W(A_f) = F_sigma(f) A(phi2, phi1)`, relative residual.
pub fn twisted_symbol(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let (phi1, phi2) = (random_signal(params, rng), random_signal(params, rng));
            let f = random_function(params, rng);
            let ts = locop_twisted_symbol(&f, &phi1, &phi2).unwrap();
            relative(ts.residual, ts.symbol.max_abs())
        })
        .fold(0.0, f64::max)
}

/// Worst of `||A_f||_{T^p} / (||f||_{L^p} ||phi1|| ||phi2||)` and
/// `||B T||_{L^p} / (||T||_{T^p} ||phi1|| ||phi2||)` for `p` in `{1, 2, inf}`.
pub fn localization_bounds(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let (phi1, phi2) = (random_signal(params, rng), random_signal(params, rng));
            let f = random_function(params, rng);
            let t = random_operator(params, rng);
            let windows = phi1.norm() * phi2.norm();
            let a = localization_operator(&f, &phi1, &phi2).unwrap();
            let b = berezin_transform(&t, &phi1, &phi2).unwrap();
            [1.0, 2.0, f64::INFINITY]
                .iter()
                .map(|&p| (tn(&a, p) / (ln(&f, p) * windows)).max(ln(&b, p) / (tn(&t, p) * windows)))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// One operator of the rank-law ensemble with the counts expected for it.
#[derive(Debug, Clone, Serialize)]
pub struct RankLawCase {
    pub label: String,
    /// Expected `|zero set|`, when prescribed by construction.
    pub expected_zeros: Option<usize>,
    pub report: RegularityReport,
}

impl RankLawCase {
    /// Number of violated integer identities (0 when the law holds exactly).
    pub fn mismatches(&self) -> usize {
        let r = &self.report;
        let d = r.n * r.n;
        let z = r.zero_set.len();
        [
            r.translate_rank != d - z,
            r.kernel_dim_a != z,
            r.kernel_dim_b != z,
            self.expected_zeros.is_some_and(|e| e != z),
        ]
        .iter()
        .filter(|&&b| b)
        .count()
    }
}

/// The rank-law ensemble at one modulus: `e_0 (x) e_0`, the identity,
/// `crafted` operators for each prescribed zero count `k` in `{0, 1, N, N^2 - 1}`
/// (cycled) and `generic` random operators.
pub fn rank_law_cases(params: GroupParams, crafted: usize, generic: usize, rng: &mut SuiteRng) -> Vec<RankLawCase> {
    let n = params.n();
    let d = params.dim();
    let report = |s: &OperatorMatrix| regularity_report(s, DEFAULT_ZERO_TOLERANCE).expect("within cap");
    let e0 = rank_one(&Signal::basis(params, 0), &Signal::basis(params, 0)).unwrap();
    let mut cases = vec![
        RankLawCase {
            label: "e0 (x) e0".into(),
            expected_zeros: Some(n * (n - 1)),
            report: report(&e0),
        },
        RankLawCase {
            label: "identity".into(),
            expected_zeros: Some(d - 1),
            report: report(&OperatorMatrix::identity(params)),
        },
    ];
    let sizes = [0, 1, n, d - 1];
    for i in 0..crafted {
        let k = sizes[i % sizes.len()];
        let s = crafted_operator(params, k, rng);
        cases.push(RankLawCase {
            label: format!("crafted k={k}"),
            expected_zeros: Some(k),
            report: report(&s),
        });
    }
    for _ in 0..generic {
        let s = random_operator(params, rng);
        cases.push(RankLawCase {
            label: "generic".into(),
            expected_zeros: Some(0),
            report: report(&s),
        });
    }
    cases
}

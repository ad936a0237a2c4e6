//! Seeded random ensembles.
//!
//! All randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! `seed_from_u64(seed)`; each check draws from its own stream
//! (`set_stream(stream)`) so adding or reordering checks leaves the samples of
//! the others unchanged. Complex entries are standard complex Gaussians,
//! `(a + ib) / sqrt(2)` with `a, b ~ N(0, 1)` independent.

use num_complex::Complex64;
use qha_core::continuum::{hermite_value, ContinuumSignal, FiniteRankOperator, SampledLine};
use qha_core::tauberian::operator_with_support;
use qha_core::{GroupParams, OperatorMatrix, PhaseFunction, PhasePoint, Signal};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub type SuiteRng = ChaCha20Rng;

/// Generator for one named stream of a seeded run.
pub fn suite_rng(seed: u64, stream: u64) -> SuiteRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stable stream id for a check name (FNV-1a).
pub fn stream_id(name: &str) -> u64 {
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub fn complex_gaussian(rng: &mut SuiteRng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_signal(params: GroupParams, rng: &mut SuiteRng) -> Signal {
    Signal::new(params, (0..params.n()).map(|_| complex_gaussian(rng)).collect()).expect("finite samples")
}

pub fn random_unit_signal(params: GroupParams, rng: &mut SuiteRng) -> Signal {
    let psi = random_signal(params, rng);
    let norm = psi.norm();
    psi.scale(Complex64::new(1.0 / norm, 0.0))
}

pub fn random_operator(params: GroupParams, rng: &mut SuiteRng) -> OperatorMatrix {
    OperatorMatrix::new(params, (0..params.dim()).map(|_| complex_gaussian(rng)).collect()).expect("finite samples")
}

pub fn random_function(params: GroupParams, rng: &mut SuiteRng) -> PhaseFunction {
    PhaseFunction::from_fn(params, |_| complex_gaussian(rng))
}

/// Random phase point.
pub fn random_point(params: GroupParams, rng: &mut SuiteRng) -> PhasePoint {
    params.point_at(rng.random_range(0..params.dim()))
}

/// Operator whose Fourier-Wigner transform vanishes on exactly `zeros` random
/// points and has modulus in `[1/2, 3/2]` with a random phase elsewhere.
pub fn crafted_operator(params: GroupParams, zeros: usize, rng: &mut SuiteRng) -> OperatorMatrix {
    let d = params.dim();
    assert!(zeros <= d, "cannot prescribe more zeros than points");
    let support: Vec<PhasePoint> = sample(rng, d, d - zeros).into_iter().map(|i| params.point_at(i)).collect();
    operator_with_support(params, &support, |_| {
        let modulus = rng.random_range(0.5..1.5);
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(modulus, angle)
    })
}

/// Highest Hermite order used by the smooth continuum ensembles.
pub const MAX_HERMITE_ORDER: usize = 5;

/// `sum_{k <= 5} c_k h_k(t - a) exp(2 pi i b t)` with Gaussian `c_k` and `a, b` uniform in `[-1, 1]`.
pub fn random_smooth_signal(line: SampledLine, rng: &mut SuiteRng) -> ContinuumSignal {
    let coefficients: Vec<Complex64> = (0..=MAX_HERMITE_ORDER).map(|_| complex_gaussian(rng)).collect();
    let a = rng.random_range(-1.0..1.0);
    let b = rng.random_range(-1.0..1.0);
    ContinuumSignal::from_fn(line, |t| {
        let envelope: Complex64 = coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| c * hermite_value(k, t - a))
            .sum();
        envelope * Complex64::from_polar(1.0, std::f64::consts::TAU * b * t)
    })
}

/// `sum_{m < rank} w_m h_{j_m} (x) h_{k_m}` with complex Gaussian weights and
/// random Hermite orders `j_m, k_m <= 5`.
pub fn hermite_operator(line: SampledLine, rank: usize, rng: &mut SuiteRng) -> FiniteRankOperator {
    let components = (0..rank.max(1))
        .map(|_| {
            let w = complex_gaussian(rng);
            let j = rng.random_range(0..=MAX_HERMITE_ORDER);
            let k = rng.random_range(0..=MAX_HERMITE_ORDER);
            (
                w,
                qha_core::continuum::hermite_function(line, j),
                qha_core::continuum::hermite_function(line, k),
            )
        })
        .collect();
    FiniteRankOperator::new(components).expect("components share the grid")
}

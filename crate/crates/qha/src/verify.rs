//! The finite-model verification suite.
//!
//! Every check runs once per modulus in `N_list` on `ensemble_size` random
//! instances drawn from its own seeded stream, and results are emitted in the
//! fixed order of [`FINITE_CHECKS`].

use qha_core::GroupParams;

use crate::checks;
use crate::config::SuiteConfig;
use crate::ensembles::{stream_id, suite_rng, SuiteRng};
use crate::report::{timed, CheckResult, SuiteReport};

type Measure = fn(GroupParams, usize, &mut SuiteRng) -> f64;

/// `(name, measurement, offset)`: thresholded at `offset + tolerance(name)`;
/// the offset is one for norm ratios bounded by one.
pub const FINITE_CHECKS: &[(&str, Measure, f64)] = &[
    ("moyal", checks::moyal, 0.0),
    ("trace_integral", checks::trace_integral, 0.0),
    ("fw_unitarity", checks::fw_unitarity, 0.0),
    ("rho_inverse", checks::rho_inverse, 0.0),
    ("product_formulas", product_formulas, 0.0),
    ("commutativity", checks::commutativity, 0.0),
    ("associativity", checks::associativity, 0.0),
    ("tidbits", checks::tidbits, 0.0),
    ("young_bounds", checks::young_bounds, 1.0),
    ("adjoint_pairing", checks::adjoint_pairing, 0.0),
    ("hausdorff_young", checks::hausdorff_young, 1.0),
    ("hausdorff_young_equality", checks::hausdorff_young_equality, 0.0),
    ("localization_equivalence", checks::localization_equivalence, 0.0),
    ("twisted_symbol", checks::twisted_symbol, 0.0),
    ("localization_bounds", checks::localization_bounds, 1.0),
    ("tauberian_rank_law", rank_law, 0.0),
];

fn product_formulas(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    checks::product_formulas(params, count, rng).max()
}

/// Total mismatch count of the rank-law ensemble; crafted and generic
/// operators each number `count`.
fn rank_law(params: GroupParams, count: usize, rng: &mut SuiteRng) -> f64 {
    checks::rank_law_cases(params, count, count, rng)
        .iter()
        .map(checks::RankLawCase::mismatches)
        .sum::<usize>() as f64
}

fn stream(config: &SuiteConfig, name: &str, n: usize) -> SuiteRng {
    suite_rng(config.seed, stream_id(name) ^ n as u64)
}

pub fn run(config: &SuiteConfig) -> SuiteReport {
    let mut results = Vec::new();
    results.extend(timed(|| {
        let winners = checks::sign_convention_oracle(
            GroupParams::new(3).expect("odd modulus"),
            1e-13,
            &mut stream(config, "sign_convention", 3),
        );
        let wrong: f64 = if winners == [checks::IMPLEMENTED_CONVENTION] { 0.0 } else { 1.0 };
        let extra = winners.len().abs_diff(1) as f64;
        vec![CheckResult::thresholded(
            "sign_convention/N=3",
            wrong.max(extra),
            config.tolerance("sign_convention"),
        )]
    }));
    for &(name, measure, offset) in FINITE_CHECKS {
        for &n in &config.n_list {
            let params = GroupParams::new(n).expect("config holds odd moduli");
            results.extend(timed(|| {
                let measured = measure(params, config.ensemble_size, &mut stream(config, name, n));
                vec![CheckResult::thresholded(
                    format!("{name}/N={n}"),
                    measured,
                    offset + config.tolerance(name),
                )]
            }));
        }
    }
    SuiteReport::new("verify", config.seed, results)
}

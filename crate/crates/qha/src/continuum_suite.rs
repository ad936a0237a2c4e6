//! The sampled-continuum suite: Gaussian Fourier-Wigner transform, Lieb's
//! inequality and its trace-class form, Hausdorff-Young spot checks, and the
//! report-only modulation-space, decay and refinement monitors.

use num_complex::Complex64;
use qha_core::continuum::{
    continuum_ambiguity, continuum_stft, feichtinger_ratio, gaussian_fw_check, gaussian_signal,
    hausdorff_young_ratio, hermite_function, lieb_ratio, lieb_traceclass_ratio, locop_modspace_ratio,
    FiniteRankOperator, PhasePlane, SampledLine,
};
use rand::Rng;

use crate::config::SuiteConfig;
use crate::ensembles::{complex_gaussian, hermite_operator, random_smooth_signal, stream_id, suite_rng, SuiteRng};
use crate::report::{timed, CheckResult, SuiteReport};

/// Exponents of the Lieb sweep.
pub const LIEB_EXPONENTS: [f64; 4] = [2.0, 3.0, 4.0, 6.0];

/// Exponents `q` of the trace-class Lieb bound.
pub const TRACECLASS_EXPONENTS: [f64; 4] = [2.0, 3.0, 4.0, 6.0];

/// Resolution of the modulation-space monitors, which cost `O(n^4 log n)`.
pub const MODULATION_GRID_SAMPLES: usize = 32;

/// Sample counts of the refinement study at fixed half width.
pub const REFINEMENT_SAMPLES: [usize; 3] = [128, 256, 512];

/// Inner radii `R` of the annuli `R <= |z| <= R + 1` for the decay monitor.
pub const DECAY_RADII: [f64; 3] = [2.0, 3.0, 4.0];

/// `max_p |lieb_ratio(g, g, p) - 1|` for the standard Gaussian `g`.
pub fn lieb_matched_deviation(line: SampledLine) -> f64 {
    let g = gaussian_signal(line);
    LIEB_EXPONENTS
        .iter()
        .map(|&p| (lieb_ratio(&g, &g, p).expect("valid exponent") - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Worst Lieb ratio over `count` random smooth pairs and the sweep exponents.
pub fn lieb_random_max(line: SampledLine, count: usize, rng: &mut SuiteRng) -> f64 {
    (0..count)
        .map(|_| {
            let psi = random_smooth_signal(line, rng);
            let phi = random_smooth_signal(line, rng);
            LIEB_EXPONENTS
                .iter()
                .map(|&p| lieb_ratio(&psi, &phi, p).expect("valid exponent"))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Hermite finite-rank operators of rank 1, 2, 3 in turn.
fn hermite_ensemble(line: SampledLine, count: usize, rng: &mut SuiteRng) -> Vec<FiniteRankOperator> {
    (0..count).map(|i| hermite_operator(line, 1 + i % 3, rng)).collect()
}

/// Worst trace-class Lieb ratio over a rank `<= 3` Hermite ensemble.
pub fn lieb_traceclass_max(line: SampledLine, count: usize, rng: &mut SuiteRng) -> f64 {
    hermite_ensemble(line, count, rng)
        .iter()
        .flat_map(|s| TRACECLASS_EXPONENTS.map(|q| lieb_traceclass_ratio(s, q).expect("valid exponent")))
        .fold(0.0, f64::max)
}

/// Worst `||F_W S||_{L^q} / ||S||_{T^p}` for `(p, q)` in `{(1, inf), (2, 2)}`.
pub fn hausdorff_young_continuum_max(line: SampledLine, count: usize, rng: &mut SuiteRng) -> f64 {
    hermite_ensemble(line, count, rng)
        .iter()
        .flat_map(|s| [1.0, 2.0].map(|p| hausdorff_young_ratio(s, p).expect("valid exponent")))
        .fold(0.0, f64::max)
}

/// `max |F_W S|` on the annuli `R <= |z| <= R + 1` for Gaussian-window
/// finite-rank `S = sum_m w_m h_m (x) h_0`.
pub fn annulus_maxima(line: SampledLine, rng: &mut SuiteRng) -> Vec<f64> {
    let components = (0..3)
        .map(|m| (complex_gaussian(rng), hermite_function(line, m), gaussian_signal(line)))
        .collect();
    let fw = FiniteRankOperator::new(components).expect("same grid").fourier_wigner();
    DECAY_RADII.iter().map(|&r| fw.max_abs_in_annulus(r, r + 1.0)).collect()
}

/// Gaussian Fourier-Wigner error (real closed form) at each refinement level.
pub fn refinement_errors(half_width: f64) -> Vec<f64> {
    REFINEMENT_SAMPLES
        .iter()
        .map(|&n| gaussian_fw_check(SampledLine::new(n, half_width).expect("power of two")).max_error)
        .collect()
}

/// Modulation-space ratios for `count` instances on the coarse balanced grid:
/// `(localization ratios, Feichtinger ratios)`.
pub fn modulation_ratios(count: usize, rng: &mut SuiteRng) -> (Vec<f64>, Vec<f64>) {
    let line = SampledLine::balanced(MODULATION_GRID_SAMPLES).expect("power of two");
    let g = gaussian_signal(line);
    let n = line.n();
    let mut loc = Vec::with_capacity(count);
    let mut feich = Vec::with_capacity(count);
    for _ in 0..count {
        // Gaussian kernel k(s, t) = g(s - a) conj(g(t - b)) times a chirp
        let (a, b, c) = (rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5), rng.random_range(-1.0..1.0));
        let kernel: Vec<Complex64> = (0..n * n)
            .map(|i| {
                let (s, t) = (line.point(i / n), line.point(i % n));
                let gs = (-std::f64::consts::PI * (s - a) * (s - a)).exp();
                let gt = (-std::f64::consts::PI * (t - b) * (t - b)).exp();
                Complex64::new(gs * gt, 0.0) * Complex64::from_polar(1.0, std::f64::consts::TAU * c * s * t)
            })
            .collect();
        // slowly varying symbol with a Gaussian bump
        let width = rng.random_range(0.2..0.6);
        let f = PhasePlane::from_fn(line, |x, w| {
            Complex64::new(1.0 + (-width * std::f64::consts::PI * (x * x + w * w)).exp(), 0.0)
        });
        loc.push(locop_modspace_ratio(&f, &kernel, 1.0).expect("valid inputs").ratio);
        let t = FiniteRankOperator::new(vec![
            (complex_gaussian(rng), g.clone(), g.clone()),
            (complex_gaussian(rng), hermite_function(line, 1), g.clone()),
        ])
        .expect("same grid");
        feich.push(feichtinger_ratio(&t, &kernel).expect("valid inputs").ratio);
    }
    (loc, feich)
}

/// `|V_g g|` and `|F_W(g (x) g)|` on the configured grid, for plotting.
pub fn gaussian_heatmaps(line: SampledLine) -> (PhasePlane, PhasePlane) {
    let g = gaussian_signal(line);
    (
        continuum_stft(&g, &g).expect("same grid"),
        continuum_ambiguity(&g, &g).expect("same grid"),
    )
}

fn stream(config: &SuiteConfig, name: &str) -> SuiteRng {
    suite_rng(config.seed, stream_id(name))
}

pub fn run(config: &SuiteConfig) -> SuiteReport {
    let line = config.continuum;
    let count = config.ensemble_size;
    let tol = |name: &str| config.tolerance(name);
    let mut results = Vec::new();
    results.extend(timed(|| {
        let check = gaussian_fw_check(line);
        vec![
            // the chirped closed form e^{2 pi i x omega} e^{-pi |z|^2 / 2}
            CheckResult::thresholded("gaussian_fw/chirped", check.max_error_chirped, tol("gaussian_fw")),
            CheckResult::thresholded("gaussian_fw/real", check.max_error, tol("gaussian_fw")),
        ]
    }));
    results.extend(timed(|| {
        vec![CheckResult::thresholded("lieb_matched", lieb_matched_deviation(line), tol("lieb_matched"))]
    }));
    results.extend(timed(|| {
        let worst = lieb_random_max(line, count, &mut stream(config, "lieb_random"));
        vec![CheckResult::thresholded("lieb_random", worst, 1.0 + tol("lieb_random"))]
    }));
    results.extend(timed(|| {
        let worst = lieb_traceclass_max(line, count, &mut stream(config, "lieb_traceclass"));
        vec![CheckResult::thresholded("lieb_traceclass", worst, 1.0 + tol("lieb_traceclass"))]
    }));
    results.extend(timed(|| {
        let worst = hausdorff_young_continuum_max(line, count, &mut stream(config, "hausdorff_young_continuum"));
        vec![CheckResult::thresholded(
            "hausdorff_young_continuum",
            worst,
            1.0 + tol("hausdorff_young_continuum"),
        )]
    }));
    results.extend(timed(|| {
        let (loc, feich) = modulation_ratios(count.min(4), &mut stream(config, "modulation"));
        let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
        vec![
            CheckResult::report_only("locop_modspace_ratio/max", max(&loc)),
            CheckResult::report_only("feichtinger_ratio/max", max(&feich)),
        ]
    }));
    results.extend(timed(|| {
        let maxima = annulus_maxima(line, &mut stream(config, "decay"));
        let mut out: Vec<CheckResult> = DECAY_RADII
            .iter()
            .zip(&maxima)
            .map(|(r, m)| CheckResult::report_only(format!("decay/annulus_R={r}"), *m))
            .collect();
        // positive when some annulus maximum exceeds the previous one
        let increase = maxima.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
        out.push(CheckResult::report_only("decay/max_increase", increase));
        out
    }));
    results.extend(timed(|| {
        let errors = refinement_errors(line.half_width());
        let mut out: Vec<CheckResult> = REFINEMENT_SAMPLES
            .iter()
            .zip(&errors)
            .map(|(n, e)| CheckResult::report_only(format!("refinement/n={n}"), *e))
            .collect();
        // errors at round-off level make this ratio noisy; above 1.1 flags a non-converging trend
        let trend = errors.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        out.push(CheckResult::report_only("refinement/max_step_ratio", trend));
        out
    }));
    SuiteReport::new("continuum", config.seed, results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monitors_on_a_coarse_grid() {
        let line = SampledLine::new(128, 8.0).unwrap();
        let mut rng = suite_rng(5, 0);
        assert!(lieb_matched_deviation(line) < 1e-6);
        assert!(lieb_random_max(line, 3, &mut rng) <= 1.0 + 1e-6);
        assert!(lieb_traceclass_max(line, 3, &mut rng) <= 1.0 + 1e-6);
        assert!(hausdorff_young_continuum_max(line, 3, &mut rng) <= 1.0 + 1e-6);
        let maxima = annulus_maxima(line, &mut rng);
        assert!(maxima.windows(2).all(|w| w[1] <= w[0]), "{maxima:?}");
        let (loc, feich) = modulation_ratios(1, &mut rng);
        assert!(loc[0].is_finite() && loc[0] > 0.0);
        assert!(feich[0].is_finite() && feich[0] > 0.0);
    }
}

//! The per-object commands: regularity, localization, Berezin and spectrum.
//!
//! Each command computes a serializable summary plus the files it would
//! write; the binary decides where they go.

use qha_core::convolution::{conv_fun_op, conv_op_op};
use qha_core::localization::{berezin_transform, localization_operator, locop_twisted_symbol};
use qha_core::operator::{rank_one, schatten_report, SchattenReport};
use qha_core::tauberian::{
    arveson_spectrum, localization_density_check, regularity_report, zero_set, RegularityReport,
};
use qha_core::transforms::{ambiguity, fourier_wigner};
use qha_core::{parity_signal, OperatorMatrix, PhaseFunction, PhasePoint, Signal};
use serde::Serialize;

use crate::formats;

/// A named output file and its contents.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

fn file(name: &str, contents: String) -> OutputFile {
    OutputFile {
        name: name.to_string(),
        contents,
    }
}

/// Parses a comma-separated list of Schatten exponents; `inf` is accepted.
pub fn parse_exponents(list: &str) -> Result<Vec<f64>, String> {
    list.split(',')
        .map(|s| {
            let s = s.trim();
            let p = if s.eq_ignore_ascii_case("inf") {
                f64::INFINITY
            } else {
                s.parse::<f64>().map_err(|_| format!("`{s}` is not an exponent"))?
            };
            if p.is_nan() || p < 1.0 {
                return Err(format!("exponent {s} is outside [1, inf]"));
            }
            Ok(p)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityOutput {
    #[serde(flatten)]
    pub report: RegularityReport,
    /// For window pairs: whether the zero set of `A(phi2, phi1)` equals that of `F_W S`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambiguity_zero_sets_agree: Option<bool>,
}

/// Regularity report of an operator.
pub fn regularity_of_operator(s: &OperatorMatrix, tol: f64) -> qha_core::Result<RegularityOutput> {
    Ok(RegularityOutput {
        report: regularity_report(s, tol)?,
        ambiguity_zero_sets_agree: None,
    })
}

/// Regularity report of `phi2 (x) phi1` and the heatmap of `|A(phi2, phi1)|`.
pub fn regularity_of_windows(
    phi1: &Signal,
    phi2: &Signal,
    tol: f64,
) -> qha_core::Result<(RegularityOutput, OutputFile)> {
    let density = localization_density_check(phi1, phi2, tol)?;
    let heatmap = formats::finite_heatmap(&ambiguity(phi2, phi1)?);
    Ok((
        RegularityOutput {
            report: density.report,
            ambiguity_zero_sets_agree: Some(density.zero_sets_agree),
        },
        file("ambiguity_heatmap.csv", heatmap),
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalizeOutput {
    pub n: usize,
    pub schatten: SchattenReport,
    /// `max |A_f - f * (phi2 (x) phi1)|`.
    pub convolution_residual: f64,
    /// `max |F_W(A_f) - F_sigma(f) A(phi2, phi1)|`.
    pub twisted_symbol_residual: f64,
}

/// Localization operator `A_f` with windows `(phi1, phi2)`; writes `localization.mat`.
pub fn localize(
    f: &PhaseFunction,
    phi1: &Signal,
    phi2: &Signal,
    exponents: &[f64],
) -> qha_core::Result<(LocalizeOutput, OperatorMatrix, OutputFile)> {
    let a = localization_operator(f, phi1, phi2)?;
    let via = conv_fun_op(f, &rank_one(phi2, phi1)?)?;
    let output = LocalizeOutput {
        n: a.n(),
        schatten: schatten_report(&a, exponents)?,
        convolution_residual: a.max_abs_diff(&via)?,
        twisted_symbol_residual: locop_twisted_symbol(f, phi1, phi2)?.residual,
    };
    let out = file("localization.mat", formats::write_operator(&a));
    Ok((output, a, out))
}

#[derive(Debug, Clone, Serialize)]
pub struct NormEntry {
    pub p: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BerezinOutput {
    pub n: usize,
    /// `||B T||_{L^p(nu)}` for each requested `p`.
    pub norms: Vec<NormEntry>,
    /// `max |B T - T * (P phi1 (x) P phi2)|`.
    pub convolution_residual: f64,
}

/// Berezin transform of `t` with windows `(phi1, phi2)`; writes `berezin.fun`.
pub fn berezin(
    t: &OperatorMatrix,
    phi1: &Signal,
    phi2: &Signal,
    exponents: &[f64],
) -> qha_core::Result<(BerezinOutput, PhaseFunction, OutputFile)> {
    let b = berezin_transform(t, phi1, phi2)?;
    let via = conv_op_op(t, &rank_one(&parity_signal(phi1), &parity_signal(phi2))?)?;
    let norms = exponents
        .iter()
        .map(|&p| Ok(NormEntry { p, value: b.norm_lp(p)? }))
        .collect::<qha_core::Result<Vec<_>>>()?;
    let output = BerezinOutput {
        n: t.n(),
        norms,
        convolution_residual: b.max_abs_diff(&via)?,
    };
    let out = file("berezin.fun", formats::write_phase_function(&b));
    Ok((output, b, out))
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumOutput {
    pub n: usize,
    pub zero_set: Vec<PhasePoint>,
    pub arveson_spectrum: Vec<PhasePoint>,
    /// `max |F_W S|`.
    pub max_abs: f64,
}

/// Zero set and Arveson spectrum of `s`; writes `fourier_wigner.fun` and a heatmap of `|F_W S|`.
pub fn spectrum(s: &OperatorMatrix, tol: f64) -> qha_core::Result<(SpectrumOutput, Vec<OutputFile>)> {
    let fw = fourier_wigner(s);
    let output = SpectrumOutput {
        n: s.n(),
        zero_set: zero_set(s, tol)?,
        arveson_spectrum: arveson_spectrum(s, tol)?,
        max_abs: fw.max_abs(),
    };
    let files = vec![
        file("fourier_wigner.fun", formats::write_phase_function(&fw)),
        file("fourier_wigner_heatmap.csv", formats::finite_heatmap(&fw)),
    ];
    Ok((output, files))
}

/// Human-readable summary of a regularity report.
pub fn regularity_table(out: &RegularityOutput) -> String {
    let r = &out.report;
    let mut rows = vec![
        ("N", r.n.to_string()),
        ("zero set size", r.zero_set.len().to_string()),
        ("support size", r.support_size.to_string()),
        ("translate span rank", r.translate_rank.to_string()),
        ("kernel dim A_S", r.kernel_dim_a.to_string()),
        ("kernel dim B_S", r.kernel_dim_b.to_string()),
        ("regular", r.regular.to_string()),
        ("degenerate", r.degenerate.to_string()),
        ("Arveson support size", r.arveson_support.len().to_string()),
        ("rank law holds", r.tauberian_identity_holds.to_string()),
    ];
    if let Some(agree) = out.ambiguity_zero_sets_agree {
        rows.push(("ambiguity zero sets agree", agree.to_string()));
    }
    rows.iter().map(|(k, v)| format!("{k:<26} {v}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use qha_core::GroupParams;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponent_lists() {
        assert_eq!(parse_exponents("1, 2,inf").unwrap(), vec![1.0, 2.0, f64::INFINITY]);
        assert!(parse_exponents("0.5").is_err());
        assert!(parse_exponents("x").is_err());
    }

    #[test]
    fn basis_windows_give_the_documented_counts() {
        let g = GroupParams::new(5).unwrap();
        let e0 = Signal::basis(g, 0);
        let (out, heatmap) = regularity_of_windows(&e0, &e0, 1e-9).unwrap();
        assert_eq!(out.report.zero_set.len(), 20);
        assert_eq!(out.report.translate_rank, 5);
        assert_eq!(out.ambiguity_zero_sets_agree, Some(true));
        assert_eq!(heatmap.contents.lines().count(), 26);
        let zero = regularity_of_operator(&OperatorMatrix::zeros(g), 1e-9).unwrap();
        assert!(zero.report.degenerate);
    }

    #[test]
    fn constant_symbol_localizes_to_a_multiple_of_the_identity() {
        let g = GroupParams::new(5).unwrap();
        let phi1 = Signal::from_fn(g, |t| c(1.0 + t as f64, 0.5));
        let phi2 = Signal::from_fn(g, |t| c(0.3, -(t as f64)));
        let f = PhaseFunction::constant(g, c(1.0, 0.0));
        let (out, a, file) = localize(&f, &phi1, &phi2, &[1.0, 2.0]).unwrap();
        let expect = OperatorMatrix::identity(g).scale(phi2.inner(&phi1).unwrap());
        assert!(a.max_abs_diff(&expect).unwrap() < 1e-12);
        assert!(out.convolution_residual < 1e-12);
        assert_eq!(file.name, "localization.mat");
        assert_eq!(formats::parse_operator(&file.contents).unwrap(), a);
    }

    #[test]
    fn spectrum_of_a_time_frequency_shift() {
        let g = GroupParams::new(5).unwrap();
        let z = g.point(1, 2);
        let (out, files) = spectrum(&qha_core::tf_shift_matrix(z), 1e-9).unwrap();
        assert_eq!(out.zero_set.len(), 24);
        assert_eq!(out.arveson_spectrum, vec![-z]);
        assert_eq!(files.len(), 2);
    }
}

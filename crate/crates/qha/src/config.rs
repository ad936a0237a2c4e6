//! Suite configuration in a flat `key = value` text file.
//!
//! ```text
//! # finite suites
//! N_list = 3, 5, 7, 9, 15
//! seed = 1
//! ensemble_size = 20
//! tol.moyal = 1e-12
//! # sampled continuum: samples, half width
//! continuum = 256, 8
//! output_dir = qha-out
//! ```
//!
//! `#` starts a comment. Every key is optional; missing keys keep their default.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qha_core::continuum::SampledLine;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("config line {line}: {message}")]
    Invalid { line: usize, message: String },

    #[error("cannot read config {path}: {message}")]
    Unreadable { path: String, message: String },
}

/// Default thresholds of the thresholded checks, by check name.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("moyal", 1e-12),
    ("trace_integral", 1e-12),
    ("fw_unitarity", 1e-12),
    ("rho_inverse", 1e-12),
    ("sign_convention", 0.0),
    ("product_formulas", 1e-11),
    ("commutativity", 1e-11),
    ("associativity", 1e-11),
    ("tidbits", 1e-13),
    ("young_bounds", 1e-10),
    ("adjoint_pairing", 1e-12),
    ("hausdorff_young", 1e-10),
    ("hausdorff_young_equality", 1e-12),
    ("localization_equivalence", 1e-12),
    ("twisted_symbol", 1e-12),
    ("localization_bounds", 1e-10),
    ("tauberian_rank_law", 0.0),
    ("gaussian_fw", 1e-6),
    ("lieb_matched", 1e-6),
    ("lieb_random", 1e-6),
    ("lieb_traceclass", 1e-6),
    ("hausdorff_young_continuum", 1e-6),
];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub n_list: Vec<usize>,
    pub seed: u64,
    pub ensemble_size: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub continuum: SampledLine,
    pub output_dir: PathBuf,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            n_list: vec![3, 5, 7, 9, 15],
            seed: 1,
            ensemble_size: 20,
            tolerances: DEFAULT_TOLERANCES.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            continuum: SampledLine::default(),
            output_dir: PathBuf::from("qha-out"),
        }
    }
}

fn invalid(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        line,
        message: message.into(),
    }
}

/// Odd `N >= 3`, the only moduli for which `2` is invertible mod `N`.
pub fn check_modulus(n: usize) -> Result<(), String> {
    if n < 3 || n.is_multiple_of(2) {
        Err(format!(
            "N = {n} is not supported: the finite phase space requires odd N >= 3"
        ))
    } else {
        Ok(())
    }
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = SuiteConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid(line_no, format!("expected `key = value`, found `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let number = |v: &str| -> Result<f64, ConfigError> {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| invalid(line_no, format!("`{v}` is not a finite number")))
            };
            let integer = |v: &str| -> Result<u64, ConfigError> {
                v.parse::<u64>()
                    .map_err(|_| invalid(line_no, format!("`{v}` is not a non-negative integer")))
            };
            match key {
                "N_list" => {
                    let list = value
                        .split(',')
                        .map(|v| integer(v.trim()).map(|n| n as usize))
                        .collect::<Result<Vec<_>, _>>()?;
                    if list.is_empty() {
                        return Err(invalid(line_no, "N_list is empty"));
                    }
                    for &n in &list {
                        check_modulus(n).map_err(|m| invalid(line_no, m))?;
                    }
                    config.n_list = list;
                }
                "seed" => config.seed = integer(value)?,
                "ensemble_size" => {
                    let size = integer(value)?;
                    if size == 0 {
                        return Err(invalid(line_no, "ensemble_size must be at least 1"));
                    }
                    config.ensemble_size = size as usize;
                }
                "continuum" => {
                    let (n, l) = value
                        .split_once(',')
                        .ok_or_else(|| invalid(line_no, "expected `continuum = <n>, <L>`"))?;
                    let n = integer(n.trim())? as usize;
                    let l = number(l.trim())?;
                    config.continuum = SampledLine::new(n, l).map_err(|e| invalid(line_no, e.to_string()))?;
                }
                "output_dir" => {
                    if value.is_empty() {
                        return Err(invalid(line_no, "output_dir is empty"));
                    }
                    config.output_dir = PathBuf::from(value);
                }
                _ => {
                    let name = key
                        .strip_prefix("tol.")
                        .ok_or_else(|| invalid(line_no, format!("unknown key `{key}`")))?;
                    if !DEFAULT_TOLERANCES.iter().any(|(k, _)| *k == name) {
                        return Err(invalid(line_no, format!("unknown check `{name}`")));
                    }
                    let tol = number(value)?;
                    if tol <= 0.0 {
                        return Err(invalid(line_no, format!("tolerance for `{name}` must be positive")));
                    }
                    config.tolerances.insert(name.to_string(), tol);
                }
            }
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Unreadable {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// Threshold of a check; unknown names fall back to zero.
    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(0.0)
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qha::commands::{self, OutputFile};
use qha::config::check_modulus;
use qha::ensembles::{random_signal, stream_id, suite_rng};
use qha::formats;
use qha::{continuum_suite, verify, SuiteConfig, SuiteReport};
use qha_core::GroupParams;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "qha")]
#[command(about = "Quantum harmonic analysis on finite phase space: verification suites and tools")]
#[command(version)]
struct Cli {
    /// Suite configuration file (flat `key = value` text)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Seed of all random ensembles; overrides the configuration
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Output directory; overrides the configuration
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Print JSON instead of a table
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Windows {
    /// Window signal files `phi1 phi2` (QHA-SIG v1)
    #[arg(long, num_args = 2, value_names = ["PHI1", "PHI2"])]
    windows: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the finite-model identity suite
    Verify,

    /// Run the sampled-continuum suite and write plot-ready heatmaps
    Continuum,

    /// Zero set, translate-span rank and kernel dimensions of an operator or window pair
    Regularity {
        /// Operator file (QHA-MAT v1)
        #[arg(long, value_name = "PATH", conflicts_with_all = ["windows", "random_windows"])]
        operator: Option<PathBuf>,

        /// Window signal files `phi1 phi2` (QHA-SIG v1)
        #[arg(long, num_args = 2, value_names = ["PHI1", "PHI2"], conflicts_with = "random_windows")]
        windows: Option<Vec<PathBuf>>,

        /// Draw two random windows of length N from the seed
        #[arg(long, value_name = "N")]
        random_windows: Option<usize>,

        /// Relative zero tolerance
        #[arg(long, default_value_t = qha_core::tauberian::DEFAULT_ZERO_TOLERANCE)]
        tol: f64,
    },

    /// Localization operator of a symbol with a window pair
    Localize {
        /// Symbol file (QHA-FUN v1)
        #[arg(long, value_name = "PATH")]
        symbol: PathBuf,

        #[command(flatten)]
        windows: Windows,

        /// Schatten exponents
        #[arg(long, default_value = "1,2,inf")]
        p: String,
    },

    /// Berezin transform of an operator with a window pair
    Berezin {
        /// Operator file (QHA-MAT v1)
        #[arg(long, value_name = "PATH")]
        operator: PathBuf,

        #[command(flatten)]
        windows: Windows,

        /// Lebesgue exponents
        #[arg(long, default_value = "1,2,inf")]
        p: String,
    },

    /// Fourier-Wigner transform, zero set and Arveson spectrum of an operator
    Spectrum {
        /// Operator file (QHA-MAT v1)
        #[arg(long, value_name = "PATH")]
        operator: PathBuf,

        /// Relative zero tolerance
        #[arg(long, default_value_t = qha_core::tauberian::DEFAULT_ZERO_TOLERANCE)]
        tol: f64,
    },
}

fn load_config(cli: &Cli) -> Result<SuiteConfig> {
    let mut config = match &cli.config {
        Some(path) => SuiteConfig::load(path)?,
        None => SuiteConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output_dir = out.clone();
    }
    Ok(config)
}

fn write_outputs(dir: &Path, files: &[OutputFile]) -> Result<()> {
    for f in files {
        let path = dir.join(&f.name);
        formats::write_text(&path, &f.contents)?;
    }
    Ok(())
}

fn emit_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn load_windows(paths: &[PathBuf]) -> Result<(qha_core::Signal, qha_core::Signal)> {
    let [a, b] = paths else {
        bail!("expected exactly two window files");
    };
    let phi1 = formats::load_signal(a).with_context(|| format!("reading {}", a.display()))?;
    let phi2 = formats::load_signal(b).with_context(|| format!("reading {}", b.display()))?;
    Ok((phi1, phi2))
}

fn run_suite(cli: &Cli, config: &SuiteConfig, report: SuiteReport, files: Vec<OutputFile>) -> Result<bool> {
    let json = report.to_json();
    let mut all = files;
    all.push(OutputFile {
        name: format!("{}.json", report.suite),
        contents: json.clone() + "\n",
    });
    write_outputs(&config.output_dir, &all)?;
    if cli.json {
        println!("{json}");
    } else {
        print!("{}", report.render_table());
        for f in report.failures() {
            eprintln!("FAILED {}: measured {:e} > threshold {:e}", f.name, f.measured, f.threshold.unwrap_or(0.0));
        }
    }
    Ok(report.passed())
}

fn run(cli: &Cli) -> Result<bool> {
    let config = load_config(cli)?;
    match &cli.command {
        Command::Verify => run_suite(cli, &config, verify::run(&config), Vec::new()),
        Command::Continuum => {
            let report = continuum_suite::run(&config);
            let (stft, fw) = continuum_suite::gaussian_heatmaps(config.continuum);
            let files = vec![
                OutputFile {
                    name: "gaussian_stft_heatmap.csv".into(),
                    contents: formats::plane_heatmap(&stft),
                },
                OutputFile {
                    name: "gaussian_fourier_wigner_heatmap.csv".into(),
                    contents: formats::plane_heatmap(&fw),
                },
            ];
            run_suite(cli, &config, report, files)
        }
        Command::Regularity {
            operator,
            windows,
            random_windows,
            tol,
        } => {
            let (output, files) = if let Some(path) = operator {
                let s = formats::load_operator(path).with_context(|| format!("reading {}", path.display()))?;
                (commands::regularity_of_operator(&s, *tol)?, Vec::new())
            } else {
                let (phi1, phi2) = if let Some(paths) = windows {
                    load_windows(paths)?
                } else if let Some(n) = random_windows {
                    check_modulus(*n).map_err(anyhow::Error::msg)?;
                    let params = GroupParams::new(*n)?;
                    let mut rng = suite_rng(config.seed, stream_id("random_windows"));
                    (random_signal(params, &mut rng), random_signal(params, &mut rng))
                } else {
                    bail!("regularity needs --operator, --windows or --random-windows");
                };
                let (output, heatmap) = commands::regularity_of_windows(&phi1, &phi2, *tol)?;
                (output, vec![heatmap])
            };
            write_outputs(&config.output_dir, &files)?;
            if cli.json {
                println!("{}", emit_json(&output)?);
            } else {
                print!("{}", commands::regularity_table(&output));
            }
            Ok(true)
        }
        Command::Localize { symbol, windows, p } => {
            let f = formats::load_phase_function(symbol).with_context(|| format!("reading {}", symbol.display()))?;
            let (phi1, phi2) = load_windows(&windows.windows)?;
            let exponents = commands::parse_exponents(p).map_err(anyhow::Error::msg)?;
            let (output, _, file) = commands::localize(&f, &phi1, &phi2, &exponents)?;
            let report = OutputFile {
                name: "localization_schatten.json".into(),
                contents: emit_json(&output)? + "\n",
            };
            write_outputs(&config.output_dir, &[file, report])?;
            if cli.json {
                println!("{}", emit_json(&output)?);
            } else {
                println!("N                        {}", output.n);
                println!("rank                     {}", output.schatten.rank());
                for norm in &output.schatten.norms {
                    println!("Schatten p={:<13} {:.16e}", norm.p, norm.value);
                }
                println!("convolution residual     {:.3e}", output.convolution_residual);
                println!("twisted symbol residual  {:.3e}", output.twisted_symbol_residual);
            }
            Ok(true)
        }
        Command::Berezin { operator, windows, p } => {
            let t = formats::load_operator(operator).with_context(|| format!("reading {}", operator.display()))?;
            let (phi1, phi2) = load_windows(&windows.windows)?;
            let exponents = commands::parse_exponents(p).map_err(anyhow::Error::msg)?;
            let (output, _, file) = commands::berezin(&t, &phi1, &phi2, &exponents)?;
            write_outputs(&config.output_dir, &[file])?;
            if cli.json {
                println!("{}", emit_json(&output)?);
            } else {
                println!("N                        {}", output.n);
                for norm in &output.norms {
                    println!("L^p norm p={:<13} {:.16e}", norm.p, norm.value);
                }
                println!("convolution residual     {:.3e}", output.convolution_residual);
            }
            Ok(true)
        }
        Command::Spectrum { operator, tol } => {
            let s = formats::load_operator(operator).with_context(|| format!("reading {}", operator.display()))?;
            let (output, files) = commands::spectrum(&s, *tol)?;
            write_outputs(&config.output_dir, &files)?;
            if cli.json {
                println!("{}", emit_json(&output)?);
            } else {
                println!("N                        {}", output.n);
                println!("zero set size            {}", output.zero_set.len());
                println!("Arveson spectrum size    {}", output.arveson_spectrum.len());
                println!("max |F_W S|              {:.16e}", output.max_abs);
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

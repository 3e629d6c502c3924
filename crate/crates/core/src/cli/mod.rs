//! The `risbench` command: configuration, study orchestration and output.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric or calibration
//! failure (1 is left for I/O trouble writing outputs).

pub mod config;
pub mod output;
mod validate;

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::materials::{material_from_table, CarrierConfig, IndexConvention};
use crate::numerics::CdfTable;
use crate::ris::{calibrate_ris_normalization, normalization_deviation, ELECTRICALLY_LARGE_WAVELENGTHS};
use crate::study::{ambient_cdf, equivalent_size_cdf, ris_gain_cdf, StudyConfig};

pub use config::{parse_config, parse_config_str, ConfigError};
pub use output::{cdf_csv, config_hash, plot_recipe, read_cdf_csv, RunManifest};
pub use validate::{validation_suite, CheckResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "risbench", version, about = "RIS versus ambient multipath in a 2D room")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Default)]
pub struct CommonArgs {
    /// Study configuration (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// CDF of the ambient room gain (coherent and/or power-sum), dB.
    AmbientCdf,
    /// CDF of the optimally phased surface gain for every configured size, dB.
    RisCdf,
    /// CDF of the surface size matching the ambient gain, m.
    Compare,
    /// Index and normal-incidence reflection of a table material.
    MaterialInfo {
        name: String,
        /// Carrier frequency in Hz.
        #[arg(default_value_t = 28e9)]
        fc: f64,
        #[arg(long, default_value = "itu-value-as-index")]
        convention: String,
    },
    /// Normalization calibration and oracle cross-checks.
    Validate,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::AmbientCdf => "ambient-cdf",
            Command::RisCdf => "ris-cdf",
            Command::Compare => "compare",
            Command::MaterialInfo { .. } => "material-info",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: EXIT_IO,
            message: format!("writing outputs: {e}"),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::UnknownMaterial(_)
        | Error::FrequencyOutOfRange { .. }
        | Error::MaterialTable(_)
        | Error::Geometry(_)
        | Error::EmptyRegion
        | Error::LengthMismatch { .. } => EXIT_CONFIG,
        _ => EXIT_NUMERIC,
    }
}

/// What a successful run produced.
#[derive(Debug, Default)]
pub struct RunReport {
    /// Human-readable summary lines (printed to stdout by the binary).
    pub lines: Vec<String>,
    /// Warnings (printed to stderr).
    pub warnings: Vec<String>,
    pub outputs: Vec<PathBuf>,
}

fn load_config(common: &CommonArgs) -> Result<StudyConfig, CliError> {
    let path = common.config.as_ref().ok_or_else(|| CliError {
        code: EXIT_CONFIG,
        message: "this subcommand needs --config PATH".into(),
    })?;
    let mut config = parse_config(path)?;
    apply_overrides(&mut config, common)?;
    Ok(config)
}

fn apply_overrides(config: &mut StudyConfig, common: &CommonArgs) -> Result<(), CliError> {
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(w) = common.workers {
        if w == 0 {
            return Err(CliError {
                code: EXIT_CONFIG,
                message: "--workers must be at least 1".into(),
            });
        }
        config.workers = Some(w);
    }
    Ok(())
}

fn quantile_line(label: &str, table: &CdfTable) -> Result<String, CliError> {
    let unit = table.unit().label();
    Ok(format!(
        "{label}: n = {}, q10 = {:.4} {unit}, median = {:.4} {unit}, q90 = {:.4} {unit}",
        table.len(),
        table.quantile(0.1)?,
        table.quantile(0.5)?,
        table.quantile(0.9)?,
    ))
}

fn emit(
    report: &mut RunReport,
    dir: &Path,
    stem: &str,
    series: &[(String, &CdfTable)],
    xlabel: &str,
    command: &str,
    config: &StudyConfig,
    started: Instant,
) -> Result<(), CliError> {
    let csv = cdf_csv(series);
    let labels: Vec<String> = series.iter().map(|(l, _)| l.clone()).collect();
    let recipe = plot_recipe(&format!("{stem}.csv"), &labels, xlabel);
    let written = output::write_outputs(dir, stem, &csv, &recipe, |paths| {
        RunManifest::new(command, config, started.elapsed(), paths)
    })?;
    report.outputs.extend(written);
    Ok(())
}

fn calibrate(carrier: &CarrierConfig, report: &mut RunReport) -> Result<(), CliError> {
    let kappa = calibrate_ris_normalization(carrier)?;
    report.lines.push(format!(
        "normalization kappa = {kappa:.6e}, deviation from -mu0 = {:.3e}",
        normalization_deviation(kappa)
    ));
    Ok(())
}

/// Runs one subcommand; the binary maps the error's code to the exit status.
pub fn run(command: &Command, common: &CommonArgs) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let mut report = RunReport::default();
    match command {
        Command::AmbientCdf => {
            let config = load_config(common)?;
            let tables = ambient_cdf(&config)?;
            let series: Vec<(String, &CdfTable)> =
                tables.iter().map(|(s, t)| (s.label().to_string(), t)).collect();
            for (label, t) in &series {
                report.lines.push(quantile_line(label, t)?);
            }
            emit(&mut report, &common.out, "ambient_cdf", &series, "gain (dB)", command.name(), &config, started)?;
        }
        Command::RisCdf => {
            let config = load_config(common)?;
            if config.ris_sizes.is_empty() {
                return Err(CliError {
                    code: EXIT_CONFIG,
                    message: "ris-cdf needs [ris] sizes".into(),
                });
            }
            let lambda = config.carrier.wavelength();
            for &l in &config.ris_sizes {
                if l < ELECTRICALLY_LARGE_WAVELENGTHS * lambda {
                    report.warnings.push(format!(
                        "surface of {l} m is shorter than {ELECTRICALLY_LARGE_WAVELENGTHS} wavelengths; edge diffraction is neglected"
                    ));
                }
            }
            calibrate(&config.carrier, &mut report)?;
            let tables = ris_gain_cdf(&config)?;
            let series: Vec<(String, &CdfTable)> =
                tables.iter().map(|(l, t)| (format!("L={l}m"), t)).collect();
            for (label, t) in &series {
                report.lines.push(quantile_line(label, t)?);
            }
            emit(&mut report, &common.out, "ris_cdf", &series, "gain (dB)", command.name(), &config, started)?;
        }
        Command::Compare => {
            let config = load_config(common)?;
            calibrate(&config.carrier, &mut report)?;
            let results = equivalent_size_cdf(&config)?;
            let series: Vec<(String, &CdfTable)> =
                results.iter().map(|r| (r.series.label().to_string(), &r.cdf)).collect();
            for r in &results {
                report.lines.push(quantile_line(r.series.label(), &r.cdf)?);
                report.lines.push(format!(
                    "{}: {} of {} samples saturated at L = W, {} degenerate",
                    r.series.label(),
                    r.saturated,
                    r.sizes.len(),
                    r.degenerate
                ));
            }
            emit(
                &mut report,
                &common.out,
                "equivalent_size",
                &series,
                "equivalent surface size (m)",
                command.name(),
                &config,
                started,
            )?;
        }
        Command::MaterialInfo { name, fc, convention } => {
            let convention: IndexConvention = convention.parse()?;
            let carrier = CarrierConfig::new(*fc).map_err(|e| CliError {
                code: EXIT_CONFIG,
                message: e.to_string(),
            })?;
            let m = material_from_table(name, *fc, convention)?;
            let r0 = m.reflection(0.0, &carrier)?;
            report.lines.push(format!("material {} at {} GHz", m.name, fc / 1e9));
            report.lines.push(format!("n = {:.6} {:+.6}j", m.n.re, m.n.im));
            report.lines.push(format!("eps_r = {:.6} {:+.6}j", m.eps_r.re, m.eps_r.im));
            report.lines.push(format!(
                "R(0) = {:.6} {:+.6}j, |R(0)| = {:.6}",
                r0.re,
                r0.im,
                r0.norm()
            ));
        }
        Command::Validate => {
            let config = match &common.config {
                Some(_) => Some(load_config(common)?),
                None => None,
            };
            let checks = validation_suite(config.as_ref())?;
            let mut failed = 0;
            for c in &checks {
                report.lines.push(c.to_string());
                if !c.passed {
                    failed += 1;
                }
            }
            if failed > 0 {
                return Err(CliError {
                    code: EXIT_NUMERIC,
                    message: format!("{failed} of {} validation checks failed:\n{}", checks.len(), report.lines.join("\n")),
                });
            }
        }
    }
    Ok(report)
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(&cli.command, &cli.common) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for l in &report.lines {
                println!("{l}");
            }
            for p in &report.outputs {
                println!("wrote {}", p.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

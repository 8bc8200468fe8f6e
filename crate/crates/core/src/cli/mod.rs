//! The `beamlab` command-line front end.
//!
//! Every run is described by a [`ScanConfig`], read from `--config` and then
//! overridden by flags. Exit codes: 0 success, 2 configuration error, 3
//! numerical guard failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use commands::{
    draw_params, run_command, sampled_kernel_psd, ClassifyRow, CommandKind, CommandOutput,
    ComparisonRow, Document, PhysicalityRow, PropagateRow, PtRow, RunOptions, WidthSample,
    WitnessDocument, WitnessRecord, FIELD_2D_POINTS, PSD_GRID_POINTS, PSD_HALF_WIDTH,
};
pub use config::{canonical_name, Family, FamilyParams, OutputFormat, Range, ScanConfig};
pub use output::{format_number, Cell, Table};

use crate::error::ParamError;
use crate::oracle::OracleError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("numerical guard: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::InvalidGrid(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "beamlab",
    version,
    about = "Gaussian beam propagation, entanglement witnesses and separability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Width, curvature radius, Guoy phase and coherence length versus z.
    Propagate(CommonArgs),
    /// Projected-width witness of a rotated elliptic beam.
    Witness(CommonArgs),
    /// Uncertainty-matrix eigenvalues and verdicts of twisted and curv beams.
    Physicality(CommonArgs),
    /// Separable / entangled / unphysical classification.
    Classify(CommonArgs),
    /// Partial transpose of the variance matrix and its twin family.
    Pt(CommonArgs),
    /// Closed forms against the brute-force numerical oracles.
    CompareOracle(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// JSON scan configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Add oracle cross-checks to the output.
    #[arg(long)]
    verify: bool,
    /// Rerun the witness on numerically propagated fields.
    #[arg(long)]
    numeric: bool,
    /// Draw random parameter sets from this seed (compare-oracle).
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random draws with --seed.
    #[arg(long)]
    draws: Option<usize>,
    /// coherent1d, gsm, elliptic2d, tgsm, curv or agsm.
    #[arg(long)]
    family: Option<String>,
    /// Parameter assignment name=value; repeatable. Values may be `inf`.
    #[arg(long = "param", short = 'p')]
    params: Vec<String>,
    /// Parameter to scan.
    #[arg(long)]
    scan_axis: Option<String>,
    /// start:stop:steps.
    #[arg(long)]
    scan_range: Option<String>,
    /// start:stop:steps.
    #[arg(long)]
    z_range: Option<String>,
}

impl CommonArgs {
    fn to_config(&self) -> Result<ScanConfig, CliError> {
        let mut config = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))?;
                let mut c = ScanConfig::from_json(&text)?;
                if let Some(f) = &self.family {
                    c.family = f.parse()?;
                }
                c
            }
            None => {
                let family = self
                    .family
                    .as_deref()
                    .ok_or_else(|| CliError::Config("family: required without --config".into()))?;
                ScanConfig::new(family.parse()?)
            }
        };
        for p in &self.params {
            config.set_parameter(p)?;
        }
        if let Some(a) = &self.scan_axis {
            config.scan_axis = Some(canonical_name(a).to_string());
        }
        if let Some(r) = &self.scan_range {
            config.scan_range = Some(r.parse()?);
        }
        if let Some(r) = &self.z_range {
            config.z_range = Some(r.parse()?);
        }
        if let Some(o) = &self.out {
            config.output_path = Some(o.clone());
        }
        if let Some(f) = &self.format {
            config.output_format = Some(f.parse()?);
        }
        if self.seed.is_some() {
            config.seed = self.seed;
        }
        if self.draws.is_some() {
            config.draws = self.draws;
        }
        config.validate()?;
        Ok(config)
    }
}

fn execute(kind: CommandKind, args: &CommonArgs) -> Result<(), CliError> {
    let config = args.to_config()?;
    let output = run_command(
        kind,
        &config,
        RunOptions {
            verify: args.verify,
            numeric: args.numeric,
        },
    )?;
    let format = config.output_format.unwrap_or(kind.default_format());
    let bytes = match format {
        OutputFormat::Csv => output.table.to_csv()?,
        OutputFormat::Json => output.json,
    };
    output::emit(&bytes, config.output_path.as_deref())?;
    if format == OutputFormat::Csv {
        if let Some(note) = output.note {
            eprintln!("{}", note.trim_end());
        }
    }
    Ok(())
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (kind, args) = match &cli.command {
        Command::Propagate(a) => (CommandKind::Propagate, a),
        Command::Witness(a) => (CommandKind::Witness, a),
        Command::Physicality(a) => (CommandKind::Physicality, a),
        Command::Classify(a) => (CommandKind::Classify, a),
        Command::Pt(a) => (CommandKind::Pt, a),
        Command::CompareOracle(a) => (CommandKind::CompareOracle, a),
    };
    match execute(kind, args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("beamlab: error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point of the `beamlab` binary.
pub fn main() -> i32 {
    run(std::env::args_os())
}

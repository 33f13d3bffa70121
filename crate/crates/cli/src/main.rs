//! `swarmprint`: emission estimates, metered swarm runs and the reference table.
//!
//! Exit codes: 0 success, 1 output failure, 2 parse or validation failure,
//! 3 every run failed, 4 corrupted data asset.

mod inputs;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swarmprint::catalog::{load_reference_table_from, AlgorithmDescriptor, CatalogError, DataSource};
use swarmprint::emission::estimate_emissions;
use swarmprint::harness::{catalog_table, compare_algorithms, run_experiment, HarnessError, RunReport};
use swarmprint::NormalizationMode;

use inputs::Overrides;
use output::Format;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    AllRunsFailed(String),
    Corrupt(String),
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Output(_) => 1,
            CliError::Input(_) => 2,
            CliError::AllRunsFailed(_) => 3,
            CliError::Corrupt(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::AllRunsFailed(m) | CliError::Corrupt(m) | CliError::Output(m) => {
                f.write_str(m)
            }
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Corrupt { .. } => CliError::Corrupt(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::NoSuccessfulRuns => CliError::AllRunsFailed(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "swarmprint", version, about = "Carbon-footprint estimates for swarm optimizers")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input file (`-` for stdin).
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Overrides the plan's base seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Parallel runs.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Fixed unit time, hours.
    #[arg(long, global = true, conflicts_with = "t_unit_measured")]
    t_unit_hours: Option<f64>,

    /// Use each run's measured wall time as the unit time.
    #[arg(long, global = true)]
    t_unit_measured: bool,

    /// Region code looked up in the region table.
    #[arg(long, global = true)]
    region: Option<String>,

    /// Hardware profile file (`power_kw = …`, `utilization = …`).
    #[arg(long, global = true)]
    hardware: Option<PathBuf>,

    /// Region table CSV (`region,kg_co2_per_kwh`) replacing the shipped one.
    #[arg(long, global = true)]
    regions: Option<PathBuf>,

    /// Percentage scheme for `compare`.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Proportional)]
    mode: Mode,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Mode {
    Proportional,
    LevelGrid,
}

impl From<Mode> for NormalizationMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Proportional => NormalizationMode::Proportional,
            Mode::LevelGrid => NormalizationMode::LevelGrid,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate kg CO₂ from an emission-inputs file.
    Estimate,
    /// Execute an experiment plan and report every run.
    Run,
    /// Execute a plan and compare algorithms.
    Compare,
    /// Print the reference complexity table.
    Table,
    /// Re-render a saved `run` JSON document.
    Report,
}

impl Cli {
    fn overrides(&self) -> Result<Overrides, CliError> {
        Ok(Overrides {
            t_unit_hours: self.t_unit_hours,
            t_unit_measured: self.t_unit_measured,
            region: self.region.clone(),
            hardware: self.hardware.as_deref().map(inputs::load_hardware).transpose()?,
            regions_file: self.regions.clone(),
        })
    }

    fn input_text(&self) -> Result<String, CliError> {
        let path = self.input.as_deref().ok_or_else(|| CliError::Input("--input is required".into()))?;
        inputs::read_text(path)
    }

    fn catalog(&self) -> Result<Vec<AlgorithmDescriptor>, CliError> {
        Ok(load_reference_table_from(&DataSource::from_env())?)
    }

    fn execute(&self) -> Result<Vec<RunReport>, CliError> {
        let plan = inputs::parse_plan(&self.input_text()?, &self.overrides()?, self.seed)?;
        let catalog = self.catalog()?;
        Ok(run_experiment(&plan, &catalog, self.workers.max(1))?)
    }
}

fn all_failed(reports: &[RunReport]) -> bool {
    !reports.is_empty() && reports.iter().all(|r| !r.succeeded())
}

fn dispatch(cli: &Cli) -> Result<(String, Option<CliError>), CliError> {
    match cli.command {
        Command::Estimate => {
            let inputs = inputs::parse_emission_inputs(&cli.input_text()?, &cli.overrides()?)?;
            let estimate = estimate_emissions(&inputs).map_err(|e| CliError::Input(e.to_string()))?;
            Ok((output::estimate(&inputs, &estimate, cli.format)?, None))
        }
        Command::Run => {
            let reports = cli.execute()?;
            let rendered = output::runs(&reports, cli.format)?;
            let failure = all_failed(&reports).then(|| CliError::AllRunsFailed("every run failed".into()));
            Ok((rendered, failure))
        }
        Command::Compare => {
            let reports = cli.execute()?;
            let comparison = compare_algorithms(&reports, cli.mode.into())?;
            Ok((output::comparison(&comparison, cli.format)?, None))
        }
        Command::Table => {
            let table = catalog_table(&cli.catalog()?)?;
            Ok((output::table(&table, cli.format)?, None))
        }
        Command::Report => {
            let reports: Vec<RunReport> = serde_json::from_str(&cli.input_text()?)
                .map_err(|e| CliError::Input(format!("invalid run document: {e}")))?;
            Ok((output::runs(&reports, cli.format)?, None))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = dispatch(&cli).and_then(|(text, failure)| {
        match &cli.output {
            Some(path) => std::fs::write(path, &text)
                .map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

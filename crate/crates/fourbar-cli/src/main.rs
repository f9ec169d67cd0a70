mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{OutputFormat, Overrides, RunConfig};
use fourbar::verify::{run_verification, VerifyOptions};
use fourbar::{Criterion, FourBar};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Standing-balance analysis of a planar double four-bar mechanism.
#[derive(Parser)]
#[command(name = "fourbar", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    overrides: FlagOverrides,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the chosen criterion across the standing family and write the
    /// per-angle forces, torques, and center-of-pressure data.
    Sweep,
    /// Run min-wrench and min-torque on the same grid and write the right
    /// foot's vertical force and sensitivity side by side.
    Compare,
    /// Check the internal consistency of the model and solvers; prints one
    /// line per invariant and exits nonzero if any fails.
    Verify {
        #[arg(long, hide = true)]
        corrupt_mbj: bool,
    },
}

#[derive(Args)]
struct FlagOverrides {
    /// Key-value configuration file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path stem; the extension is replaced per artifact.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv, svg, or both.
    #[arg(long, global = true)]
    format: Option<String>,
    /// min-wrench, min-torque, or min-tangential.
    #[arg(long, global = true)]
    criterion: Option<String>,
    #[arg(long, global = true)]
    xi_min_deg: Option<f64>,
    #[arg(long, global = true)]
    xi_max_deg: Option<f64>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Leg length [m].
    #[arg(long, global = true)]
    l: Option<f64>,
    /// Stance width [m].
    #[arg(long, global = true)]
    d: Option<f64>,
    /// Leg mass [kg].
    #[arg(long, global = true)]
    ml: Option<f64>,
    /// Base mass [kg].
    #[arg(long, global = true)]
    mb: Option<f64>,
    /// Gravity [m/s^2].
    #[arg(long, global = true)]
    g: Option<f64>,
}

enum CliError {
    /// Bad configuration: unknown keys, unparseable values, invalid
    /// parameters, out-of-range grids.
    Config(String),
    /// Filesystem trouble: unreadable config file, unwritable output.
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            CliError::Io(_) => ExitCode::from(3),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Io(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let cfg = load_config(&cli.overrides)?;
    match &cli.command {
        Command::Sweep => {
            let (degs, rads) = cfg.grid().map_err(CliError::Config)?;
            let model = build_model(&cfg)?;
            let criterion = cfg.criterion;
            let rows = model
                .sweep_points(&rads, criterion)
                .map_err(|e| CliError::Config(e.to_string()))?;
            emit_artifacts(&cfg, "sweep", |format| match format {
                OutputFormat::Csv => output::sweep_csv(&degs, &rows),
                _ => output::sweep_svg(&degs, &rows),
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare => {
            // The comparison always runs the same two criteria; a configured
            // criterion selects nothing here and is ignored.
            let (degs, rads) = cfg.grid().map_err(CliError::Config)?;
            let model = build_model(&cfg)?;
            let mg = model.params().weight();
            let wrench = model
                .sweep_points(&rads, Criterion::MinWrenchNorm)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let torque = model
                .sweep_points(&rads, Criterion::MinJointTorqueNorm)
                .map_err(|e| CliError::Config(e.to_string()))?;
            emit_artifacts(&cfg, "compare", |format| match format {
                OutputFormat::Csv => output::compare_csv(&degs, &wrench, &torque, mg),
                _ => output::compare_svg(&degs, &wrench, &torque, mg),
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { corrupt_mbj } => {
            let params = cfg.model_params().map_err(CliError::Config)?;
            let options = VerifyOptions { corrupt_coupling_block: *corrupt_mbj };
            let report = run_verification(&params, &options)
                .map_err(|e| CliError::Config(e.to_string()))?;
            print!("{report}");
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn load_config(flags: &FlagOverrides) -> Result<RunConfig, CliError> {
    let mut cfg = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
            RunConfig::parse(&text).map_err(CliError::Config)?
        }
        None => RunConfig::default(),
    };
    let overrides = Overrides {
        l: flags.l,
        d: flags.d,
        m_l: flags.ml,
        m_b: flags.mb,
        g: flags.g,
        criterion: flags.criterion.clone(),
        xi_min_deg: flags.xi_min_deg,
        xi_max_deg: flags.xi_max_deg,
        steps: flags.steps,
        out: flags.out.clone(),
        format: flags.format.clone(),
    };
    cfg.apply(&overrides).map_err(CliError::Config)?;
    Ok(cfg)
}

fn build_model(cfg: &RunConfig) -> Result<FourBar, CliError> {
    let params = cfg.model_params().map_err(CliError::Config)?;
    FourBar::new(params).map_err(|e| CliError::Config(e.to_string()))
}

/// Resolve the artifact paths for the run and write the requested formats.
/// `out` names a stem; each artifact replaces its extension, so `--format
/// both` yields a sibling .csv and .svg pair.
fn emit_artifacts<F>(cfg: &RunConfig, default_stem: &str, render: F) -> Result<(), CliError>
where
    F: Fn(OutputFormat) -> String,
{
    let stem = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(default_stem));
    let want_csv = matches!(cfg.format, OutputFormat::Csv | OutputFormat::Both);
    let want_svg = matches!(cfg.format, OutputFormat::Svg | OutputFormat::Both);
    if want_csv {
        write_artifact(&stem.with_extension("csv"), &render(OutputFormat::Csv))?;
    }
    if want_svg {
        write_artifact(&stem.with_extension("svg"), &render(OutputFormat::Svg))?;
    }
    Ok(())
}

fn write_artifact(path: &Path, contents: &str) -> Result<(), CliError> {
    output::write_atomic(path, contents).map_err(CliError::Io)?;
    println!("wrote {}", path.display());
    Ok(())
}

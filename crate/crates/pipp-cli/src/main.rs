//! `pipp` — intensity approximations for repulsive pairwise-interaction Gibbs
//! point processes, with a Monte-Carlo validation pipeline.
//!
//! Subcommands:
//! * `approx`      — solve λ_PS and λ_DPP for one model and print them as JSON;
//! * `sweep`       — sweep γ₁ over a grid, writing a CSV table (optionally
//!   with Monte-Carlo columns);
//! * `figure`      — render sweep CSVs as an SVG (solid λ_DPP, dashed λ_PS,
//!   boxplot glyphs for the Monte-Carlo intensities);
//! * `paper-suite` — run all 14 study configurations into a directory of
//!   CSVs, SVGs and a manifest.
//!
//! Exit codes: 2 for configuration errors, 3 for numeric failures, 1 when a
//! suite run had failing configurations.

mod config;
mod figure;
mod suite;
mod sweep;

use clap::{Args, Parser, Subcommand};
use pipp::approx::approximate;
use pipp::quadrature::{summarize, QuadratureError};
use std::path::PathBuf;
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(#[from] QuadratureError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            CliError::Numeric(_) => ExitCode::from(3),
            CliError::Io(_) => ExitCode::from(1),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "pipp",
    about = "Intensity approximations for repulsive pairwise-interaction Gibbs point processes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve both intensity approximations for a model
    Approx(ApproxArgs),
    /// Sweep gamma1 over a grid and write the results as CSV
    Sweep(SweepArgs),
    /// Render sweep CSVs as an SVG figure (one panel per file)
    Figure(FigureArgs),
    /// Run the full 14-configuration study
    PaperSuite(SuiteArgs),
}

#[derive(Args)]
struct ApproxArgs {
    /// Model JSON file ({"family", "gamma", "radii", "hardcore", "dim"})
    #[arg(long)]
    config: PathBuf,
    /// Activity parameter
    #[arg(long)]
    beta: f64,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment JSON file
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path (overrides the config's output_path)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed override for the Monte-Carlo columns
    #[arg(long)]
    seed: Option<u64>,
    /// Skip the Monte-Carlo columns even if the config requests them
    #[arg(long)]
    no_mc: bool,
}

#[derive(Args)]
struct FigureArgs {
    /// Sweep CSV files, one panel each
    #[arg(required = true)]
    csv: Vec<PathBuf>,
    /// Output SVG path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SuiteArgs {
    /// Output directory for CSVs, SVGs and the manifest
    #[arg(long)]
    out: PathBuf,
    /// Shrinks replicate counts and chain lengths; 1.0 is the full protocol
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip Monte-Carlo validation (approximation curves only)
    #[arg(long)]
    no_mc: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Approx(args) => cmd_approx(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Figure(args) => cmd_figure(args),
        Command::PaperSuite(args) => cmd_paper_suite(args),
    };
    match outcome {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error}");
            error.exit_code()
        }
    }
}

fn cmd_approx(args: ApproxArgs) -> Result<ExitCode, CliError> {
    if !(args.beta > 0.0 && args.beta.is_finite()) {
        return Err(CliError::Config(format!(
            "beta must be positive and finite, got {}",
            args.beta
        )));
    }
    let model = config::load_model(&args.config)?;
    let summary = summarize(&model)?;
    let result = approximate(args.beta, &summary);
    let output = serde_json::json!({
        "beta": args.beta,
        "G": summary.g,
        "kappa": summary.kappa,
        "lambda_ps": result.lambda_ps,
        "lambda_dpp": result.lambda_dpp,
        "residual_ps": result.residual_ps,
        "residual_dpp": result.residual_dpp,
        "iterations_ps": result.iterations_ps,
        "iterations_dpp": result.iterations_dpp,
    });
    println!("{output}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, CliError> {
    let spec = config::ExperimentSpec::load(&args.config)?;
    let out = args
        .out
        .clone()
        .or_else(|| spec.output_path.clone())
        .ok_or_else(|| CliError::Config("no output path: pass --out or set output_path".into()))?;
    if let Some(mc) = &spec.mc {
        if !args.no_mc {
            let model = spec.model_template.clone();
            let probe = spec
                .sim_config(&model, 0, args.seed)
                .expect("mc block present");
            for warning in probe.warnings() {
                eprintln!("warning: {warning}");
            }
            eprintln!(
                "sweep: {} grid values x {} replicates x {} steps",
                spec.grid().len(),
                mc.n_replicates,
                mc.n_steps
            );
        }
    }
    let rows = sweep::run_sweep(&spec, args.seed, args.no_mc)?;
    sweep::write_csv(&rows, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_figure(args: FigureArgs) -> Result<ExitCode, CliError> {
    let mut panels = Vec::new();
    for path in &args.csv {
        let rows = sweep::read_csv(path)?;
        if rows.is_empty() {
            return Err(CliError::Config(format!("{}: empty table", path.display())));
        }
        let title = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        panels.push((title, rows));
    }
    let svg = figure::render(&panels);
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(&args.out, svg)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_paper_suite(args: SuiteArgs) -> Result<ExitCode, CliError> {
    if !(args.scale > 0.0 && args.scale <= 1.0) {
        return Err(CliError::Config(format!(
            "scale must lie in (0, 1], got {}",
            args.scale
        )));
    }
    let failures = suite::run(&args.out, args.scale, args.seed, args.no_mc)?;
    if failures > 0 {
        eprintln!("{failures} configuration(s) failed; see the manifest");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

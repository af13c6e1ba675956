//! Command-line front end for the Bell-state quantum eraser simulator.
//!
//! Subcommands: `panel` (print the complementarity quantities for each
//! angle), `sweep` (write tradeoff.csv, Venn diagrams, patterns, and run
//! the self-checks), `pattern` and `venn` (write just those artifacts),
//! and `verify` (recompute every analytic quantity from the joint density
//! matrix and compare).
//!
//! Exit status: 0 when everything passed, 1 when a self-check failed,
//! 2 for configuration errors, 3 for I/O failures.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use eraser_cli::config::{ConfigError, ExperimentConfig, RawConfig};
use eraser_cli::run::{run_sweep, run_verify, write_pattern_file, write_venn_files, RunError};
use eraser_core::pipeline::ScalarPanel;

#[derive(Parser)]
#[command(
    name = "eraser",
    version,
    about = "Bell-state quantum eraser simulator: entropic complementarity and conditional interference"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the scalar panel (S, eigenvalues, coherence, path information, D, V) per angle
    Panel(CommonArgs),
    /// Run an angle sweep: tradeoff.csv plus Venn/pattern artifacts and self-checks
    Sweep(CommonArgs),
    /// Write conditional interference pattern CSVs for each angle
    Pattern(CommonArgs),
    /// Write the entropic Venn diagrams for each angle
    Venn(CommonArgs),
    /// Recompute all analytic quantities from the joint density matrix; write verify.txt
    Verify(CommonArgs),
}

/// Flags mirror the config-file keys; a flag beats the file.
#[derive(Args)]
struct CommonArgs {
    /// Path to a flat `key = value` configuration file
    #[arg(long)]
    config: Option<PathBuf>,

    /// Single erasure angle in radians, in [0, pi/4]
    #[arg(long)]
    theta: Option<f64>,

    /// Sweep start angle (radians)
    #[arg(long)]
    theta_start: Option<f64>,

    /// Sweep stop angle (radians)
    #[arg(long)]
    theta_stop: Option<f64>,

    /// Number of sweep angles (inclusive endpoints)
    #[arg(long)]
    theta_count: Option<usize>,

    /// Slit width in meters
    #[arg(long)]
    a: Option<f64>,

    /// Slit separation in meters
    #[arg(long)]
    d: Option<f64>,

    /// Slit-to-screen distance in meters
    #[arg(long = "L")]
    l: Option<f64>,

    /// Wavelength in meters
    #[arg(long)]
    lambda: Option<f64>,

    /// Left edge of the screen window in meters
    #[arg(long)]
    x_min: Option<f64>,

    /// Right edge of the screen window in meters
    #[arg(long)]
    x_max: Option<f64>,

    /// Number of screen grid points
    #[arg(long)]
    n_points: Option<usize>,

    /// Output directory
    #[arg(long)]
    out_dir: Option<String>,

    /// Toggle the Venn self-check (and Venn files in `sweep`)
    #[arg(long = "checks.venn")]
    checks_venn: Option<bool>,

    /// Toggle the chain-rule self-check
    #[arg(long = "checks.chain_rule")]
    checks_chain_rule: Option<bool>,

    /// Toggle the pattern self-checks (and pattern files in `sweep`)
    #[arg(long = "checks.patterns")]
    checks_patterns: Option<bool>,

    /// Toggle the oracle self-check
    #[arg(long = "checks.oracle")]
    checks_oracle: Option<bool>,
}

impl CommonArgs {
    fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut raw = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                RawConfig::parse(&text)?
            }
            None => RawConfig::default(),
        };
        raw.override_with(
            self.theta,
            self.theta_start,
            self.theta_stop,
            self.theta_count,
            self.a,
            self.d,
            self.l,
            self.lambda,
            self.x_min,
            self.x_max,
            self.n_points,
            self.out_dir.clone(),
        );
        let mut cfg = raw.resolve()?;
        if let Some(v) = self.checks_venn {
            cfg.checks.venn = v;
        }
        if let Some(v) = self.checks_chain_rule {
            cfg.checks.chain_rule = v;
        }
        if let Some(v) = self.checks_patterns {
            cfg.checks.patterns = v;
        }
        if let Some(v) = self.checks_oracle {
            cfg.checks.oracle = v;
        }
        Ok(cfg)
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Config(#[from] ConfigError),

    #[error("{0}")]
    Run(#[from] RunError),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Panel(args) => cmd_panel(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Pattern(args) => cmd_pattern(args),
        Command::Venn(args) => cmd_venn(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                CliError::Config(_) => ExitCode::from(2),
                CliError::Io { .. } | CliError::Run(RunError::Write { .. }) => ExitCode::from(3),
                CliError::Run(_) => ExitCode::from(2),
            }
        }
    }
}

fn cmd_panel(args: &CommonArgs) -> Result<ExitCode, CliError> {
    let cfg = args.resolve()?;
    println!("{}", ScalarPanel::CSV_HEADER);
    for &theta in &cfg.thetas {
        println!("{}", eraser_core::pipeline::scalar_panel(theta).csv_row());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: &CommonArgs) -> Result<ExitCode, CliError> {
    let cfg = args.resolve()?;
    let report = run_sweep(&cfg)?;
    print!("{}", report.summary());
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_pattern(args: &CommonArgs) -> Result<ExitCode, CliError> {
    let cfg = args.resolve()?;
    for &theta in &cfg.thetas {
        let (path, ..) = write_pattern_file(&cfg.out_dir, theta, &cfg)?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_venn(args: &CommonArgs) -> Result<ExitCode, CliError> {
    let cfg = args.resolve()?;
    for &theta in &cfg.thetas {
        let (paths, _) = write_venn_files(&cfg.out_dir, theta)?;
        for path in paths {
            println!("wrote {}", path.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &CommonArgs) -> Result<ExitCode, CliError> {
    let cfg = args.resolve()?;
    let (report, path) = run_verify(&cfg)?;
    print!("{}", report.to_text());
    println!("wrote {}", path.display());
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

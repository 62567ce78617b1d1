use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clonelab::correlations::DiscordOptions;
use clonelab::machine::{Branch, Family};
use clonelab::nocorr::verify_product_output;
use clonelab::oracle::ClosedForms;
use clonelab_cli::angle::parse_angle;
use clonelab_cli::point::point_report;
use clonelab_cli::spec::{Angle, Axis, Figure, Measure, SweepConfig, SweepSpec};
use clonelab_cli::sweep::{figure_sweep, write_csv, write_json};
use clonelab_cli::verify::run_verify;

/// Unified state-dependent / probabilistic qubit cloning: fidelities, output
/// correlations and figure datasets.
#[derive(Debug, Parser)]
#[command(name = "clonelab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full report for one machine: parameters, fidelities, correlations and the
    /// oracle cross-check, as JSON.
    Point {
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long)]
        gamma: f64,
        /// Input angle in [0, π/4]; accepts forms like `pi/20`.
        #[arg(long, value_parser = parse_angle, conflicts_with = "s", required_unless_present = "s")]
        theta: Option<f64>,
        /// Overlap s = sin 2θ, as an alternative to --theta.
        #[arg(long)]
        s: Option<f64>,
        /// One of 1+, 1-, 2+, 2-.
        #[arg(long, default_value = "1+")]
        branch: Branch,
        #[arg(long, default_value_t = 32)]
        discord_grid: usize,
    },
    /// Dataset behind one of the figures (CSV, or JSON with --json).
    Sweep(SweepArgs),
    /// Invariant suite at seeded random points; exit status 2 on any failure.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Correlation-free cloner at overlap s: parameters, fidelity and product checks.
    Nocorr {
        #[arg(long)]
        s: f64,
        /// Solution family 1 or 2; both when omitted.
        #[arg(long)]
        family: Option<Family>,
    },
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    figure: Option<Figure>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write JSON instead of CSV.
    #[arg(long)]
    json: bool,
    /// TOML file with sweep settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    measure: Option<Measure>,
    #[arg(long, value_enum)]
    axis: Option<Axis>,
    /// Comma-separated angles, e.g. `0,pi/20`.
    #[arg(long, value_delimiter = ',')]
    thetas: Option<Vec<Angle>>,
    #[arg(long, value_delimiter = ',')]
    gammas: Option<Vec<f64>>,
    #[arg(long)]
    b_points: Option<usize>,
    #[arg(long)]
    s_points: Option<usize>,
    #[arg(long)]
    discord_grid: Option<usize>,
    #[arg(long)]
    discord_tolerance: Option<f64>,
    #[arg(long)]
    discord_max_iterations: Option<usize>,
}

impl SweepArgs {
    fn layer(&self) -> SweepConfig {
        SweepConfig {
            figure: self.figure,
            measure: self.measure,
            axis: self.axis,
            thetas: self.thetas.clone(),
            gammas: self.gammas.clone(),
            b_points: self.b_points,
            s_points: self.s_points,
            discord_grid: self.discord_grid,
            discord_tolerance: self.discord_tolerance,
            discord_max_iterations: self.discord_max_iterations,
        }
    }
}

enum Failure {
    Usage(String),
    Verification,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(2),
    }
}

fn run(command: Command) -> Result<(), Failure> {
    let stdout = io::stdout();
    match command {
        Command::Point {
            b,
            gamma,
            theta,
            s,
            branch,
            discord_grid,
        } => {
            let theta = match (theta, s) {
                (Some(t), _) => t,
                (None, Some(s)) => clonelab::InputPair::from_overlap(s)?.theta(),
                (None, None) => unreachable!("clap requires one of --theta and --s"),
            };
            let discord = DiscordOptions::default().with_grid(discord_grid);
            let report = point_report(b, gamma, theta, branch, &discord)?;
            let mut out = stdout.lock();
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
            if !report.cross_check.passed() {
                eprintln!("cross-check failed");
                return Err(Failure::Verification);
            }
        }
        Command::Sweep(args) => {
            let config = match &args.config {
                Some(path) => SweepConfig::load(path)?,
                None => SweepConfig::default(),
            };
            let spec = SweepSpec::resolve(&config, &args.layer())?;
            log::info!(
                "{} sweep: {:?} over {:?}, {} γ values",
                spec.figure,
                spec.measure,
                spec.axis,
                spec.gammas.len()
            );
            let sweep = figure_sweep(&spec)?;
            log::info!("{} records", sweep.records.len());
            let sink: Box<dyn Write> = match &args.out {
                Some(path) => Box::new(BufWriter::new(File::create(path)?)),
                None => Box::new(BufWriter::new(stdout.lock())),
            };
            if args.json {
                write_json(&sweep.records, sink)?;
            } else {
                write_csv(&sweep.records, sink)?;
            }
            if !sweep.skipped.is_empty() {
                log::warn!("{} infeasible cells skipped", sweep.skipped.len());
            }
        }
        Command::Verify { seed, trials, json } => {
            let report = run_verify(seed, trials, &ClosedForms::default());
            let mut out = stdout.lock();
            if json {
                serde_json::to_writer_pretty(&mut out, &report)?;
                writeln!(out)?;
            } else {
                writeln!(out, "{report}")?;
            }
            if !report.passed() {
                return Err(Failure::Verification);
            }
        }
        Command::Nocorr { s, family } => {
            let families = match family {
                Some(f) => vec![f],
                None => vec![Family::One, Family::Two],
            };
            let reports = families
                .into_iter()
                .map(|f| verify_product_output(s, f))
                .collect::<clonelab::Result<Vec<_>>>()?;
            let mut out = stdout.lock();
            serde_json::to_writer_pretty(&mut out, &reports)?;
            writeln!(out)?;
            if !reports.iter().all(|r| r.passed()) {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

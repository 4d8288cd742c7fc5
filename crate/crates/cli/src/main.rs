//! `relbc`: seeded, configurable runs of every verification and
//! simulation in the toolkit, with text, JSON, and CSV reports.
//!
//! Exit codes: 0 when all checks pass, 1 when a verification fails,
//! 2 for usage or configuration errors.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use relbc_core::protocol::RunConfig;

use commands::StrategyChoice;
use config::FileConfig;
use report::{emit, Format};

pub(crate) type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

/// Every randomized command keys its trials off this seed unless told
/// otherwise.
const DEFAULT_SEED: u64 = 2012;
const DEFAULT_TRIALS: u64 = 100_000;

/// Simulator and security checks for a two-wing relativistic bit
/// commitment built on BB84 measurement records.
#[derive(Debug, Parser)]
#[command(name = "relbc", version, about)]
struct Cli {
    /// Base seed; trial k of a Monte Carlo command runs on stream k.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte Carlo trial count.
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Report encoding.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// TOML file pre-setting any flag; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the cheating analyzer: completeness, certificate operator,
    /// optimality conditions, and win probability.
    VerifyPovm {
        /// Rotate the first analyzer angle by this many radians first.
        #[arg(long, allow_negative_numbers = true)]
        perturb: Option<f64>,
        /// Eigenvalue slack for the optimality conditions [default: 1e-10].
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Tabulate the n-state cheating bound, with optional concentration
    /// rows.
    SecurityTable {
        /// Largest state count to tabulate [default: 10].
        #[arg(long)]
        n_max: Option<u32>,
        /// Extra concentration rows, each written N:EPS.
        #[arg(long, value_name = "N:EPS")]
        azuma: Vec<String>,
    },
    /// Tabulate the concentration bound over a grid of n and eps.
    AzumaTable {
        /// State counts [default: 10,100,1000,10000].
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u32>>,
        /// Deviations [default: 0.01,0.02,0.05,0.1].
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
    },
    /// Simulate one honest commitment run end to end.
    HonestRun {
        /// Number of prepared states [default: 100].
        #[arg(long)]
        n: Option<usize>,
        /// Committed bit [default: 0].
        #[arg(long)]
        bit: Option<u8>,
        /// Wing separation [default: 1].
        #[arg(long)]
        separation: Option<f64>,
        /// Depolarizing probability before each measurement [default: 0].
        #[arg(long)]
        noise: Option<f64>,
        /// Independent per-state loss probability [default: 0].
        #[arg(long)]
        loss: Option<f64>,
        /// Largest acceptable in-basis error fraction [default: 0].
        #[arg(long)]
        tolerance: Option<f64>,
        /// Largest acceptable declared-loss fraction [default: 0].
        #[arg(long)]
        max_loss: Option<f64>,
    },
    /// Estimate a cheating strategy's dual-unveiling success rate.
    CheatRun {
        /// Attack to simulate [default: optimal].
        #[arg(long, value_enum)]
        strategy: Option<StrategyChoice>,
        /// Number of prepared states [default: 1].
        #[arg(long)]
        n: Option<usize>,
        /// Acceptable error fractions; several values report a curve.
        #[arg(long, value_delimiter = ',')]
        tolerance: Option<Vec<f64>>,
    },
    /// Compare the optimal attack plus loss declarations against the
    /// surviving-state bound.
    LossCheck {
        /// Probability of declaring each state lost [default: 0.5].
        #[arg(long)]
        loss: Option<f64>,
        /// Number of prepared states [default: 20].
        #[arg(long)]
        n: Option<usize>,
    },
    /// Certify that measuring two states jointly cannot beat per-state
    /// attacks.
    CollectiveCheck {
        /// Break the second factor to show the certificate failing.
        #[arg(long)]
        corrupt: bool,
        /// Eigenvalue slack for the pair conditions [default: 1e-10].
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Reduce a conditioned multi-state attack to one unknown state via
    /// teleportation and report the conditional success rate.
    #[command(name = "lemma2-demo")]
    Lemma2Demo {
        /// Total states in the conditioned run, 1 to 3 [default: 1].
        #[arg(long)]
        n: Option<usize>,
    },
}

/// Settings shared by every command, resolved flag > file > default.
#[derive(Debug)]
struct Settings {
    seed: u64,
    trials: u64,
    format: Format,
    output: Option<PathBuf>,
}

fn resolve(cli: &Cli, file: &FileConfig) -> CliResult<Settings> {
    let format = match (cli.format, file.format.as_deref()) {
        (Some(format), _) => format,
        (None, Some(name)) => {
            Format::from_str(name, true).map_err(|err| format!("config format: {err}"))?
        }
        (None, None) => Format::Text,
    };
    Ok(Settings {
        seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        trials: cli.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
        format,
        output: cli.output.clone().or_else(|| file.output.clone()),
    })
}

fn run(cli: Cli) -> CliResult<bool> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let settings = resolve(&cli, &file)?;

    let report = match &cli.command {
        Command::VerifyPovm { perturb, tol } => {
            commands::verify_povm(perturb.or(file.perturb), tol.or(file.tol).unwrap_or(1e-10))?
        }
        Command::SecurityTable { n_max, azuma } => {
            let specs = if azuma.is_empty() {
                file.azuma.clone().unwrap_or_default()
            } else {
                azuma.clone()
            };
            commands::security_table(n_max.or(file.n_max).unwrap_or(10), &specs)?
        }
        Command::AzumaTable { n, eps } => {
            let ns = n
                .clone()
                .or_else(|| file.n_list.clone())
                .unwrap_or_else(|| vec![10, 100, 1_000, 10_000]);
            let epsilons = eps
                .clone()
                .or_else(|| file.eps_list.clone())
                .unwrap_or_else(|| vec![0.01, 0.02, 0.05, 0.1]);
            commands::azuma_table(&ns, &epsilons)?
        }
        Command::HonestRun { n, bit, separation, noise, loss, tolerance, max_loss } => {
            let defaults = RunConfig::default();
            commands::honest_run(RunConfig {
                n: n.or(file.n).unwrap_or(defaults.n),
                bit: bit.or(file.bit).unwrap_or(defaults.bit),
                separation: separation.or(file.separation).unwrap_or(defaults.separation),
                noise: noise.or(file.noise).unwrap_or(defaults.noise),
                loss: loss.or(file.loss).unwrap_or(defaults.loss),
                tolerance: tolerance.or(file.tolerance).unwrap_or(defaults.tolerance),
                max_loss: max_loss.or(file.max_loss).unwrap_or(defaults.max_loss),
                seed: settings.seed,
            })?
        }
        Command::CheatRun { strategy, n, tolerance } => {
            let choice = match (strategy, file.strategy.as_deref()) {
                (Some(choice), _) => *choice,
                (None, Some(name)) => StrategyChoice::from_str(name, true)
                    .map_err(|err| format!("config strategy: {err}"))?,
                (None, None) => StrategyChoice::Optimal,
            };
            let tolerances = tolerance
                .clone()
                .or_else(|| file.tolerance.map(|t| vec![t]))
                .unwrap_or_default();
            commands::cheat_run(
                choice,
                n.or(file.n).unwrap_or(1),
                &tolerances,
                settings.trials,
                settings.seed,
            )?
        }
        Command::LossCheck { loss, n } => commands::loss_check(
            loss.or(file.loss).unwrap_or(0.5),
            n.or(file.n).unwrap_or(20),
            settings.trials,
            settings.seed,
        )?,
        Command::CollectiveCheck { corrupt, tol } => commands::collective_check(
            *corrupt || file.corrupt.unwrap_or(false),
            tol.or(file.tol).unwrap_or(1e-10),
        )?,
        Command::Lemma2Demo { n } => commands::reduction_demo_run(
            n.or(file.n).unwrap_or(1),
            settings.trials,
            settings.seed,
        )?,
    };

    emit(&report, settings.format, settings.output.as_deref())?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

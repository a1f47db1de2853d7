#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod error;
mod scenario;
mod table;

use clap::{Parser, Subcommand};
use commands::{Method, Opponent};
use error::CliError;
use occlusion_core::Side;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use table::Table;

/// Near-boundary value analysis for visibility-based pursuit-evasion.
#[derive(Parser)]
#[command(name = "occlusion", version)]
struct Cli {
    /// Write the CSV table here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Label each state usable, non_usable, interface or not_on_boundary.
    Classify { scenarios: Vec<PathBuf> },
    /// Value estimates, bounds and oracle comparisons per state.
    Value {
        #[arg(long, value_enum, default_value = "all")]
        method: Method,
        scenarios: Vec<PathBuf>,
    },
    /// Samples of the horizon-gap function on [0, t0].
    Scurve {
        #[arg(long, default_value_t = 101)]
        t_samples: usize,
        scenarios: Vec<PathBuf>,
    },
    /// Value along a family of states approaching a non-usable boundary point.
    Profile {
        /// lo:hi:n, lo:hi:n:log or a comma-separated list.
        #[arg(long, default_value = "1e-4:1e-1:16:log")]
        dstar_grid: String,
        scenarios: Vec<PathBuf>,
    },
    /// Radial-mimic simulation from corner barrier states.
    Barrier {
        /// Time step (default 1e-3 of the smaller radius over the larger speed).
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long = "T", alias = "horizon", default_value_t = 0.1)]
        horizon: f64,
        /// radial, angular, const:R,A or random:K.
        #[arg(long, default_value = "random:10")]
        opponent: Opponent,
        #[arg(long, value_enum, default_value = "evader")]
        defender: Defender,
        scenarios: Vec<PathBuf>,
    },
    /// Solve the four-dimensional value on a grid and compare with the analysis.
    Sweep {
        /// Points per axis (replaces every axis with more than one point).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// Binary dump of the solved field.
        #[arg(long)]
        out: Option<PathBuf>,
        scenarios: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Defender {
    Evader,
    Pursuer,
}

fn emit(table: &Table, output: &Option<PathBuf>) -> Result<(), CliError> {
    match output {
        Some(p) => table.write(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => table.write(std::io::stdout().lock()),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = &cli.output;
    let load = |paths: &[PathBuf]| {
        if paths.is_empty() {
            return Err(CliError::Usage("no scenario files given".into()));
        }
        scenario::read_files(paths)
    };
    match cli.command {
        Command::Classify { scenarios } => emit(&commands::classify(&load(&scenarios)?), out),
        Command::Value { method, scenarios } => {
            let (t, problems) = commands::value(&load(&scenarios)?, method)?;
            emit(&t, out)?;
            let mut err = std::io::stderr().lock();
            for p in &problems {
                writeln!(err, "{p}")?;
            }
            match problems.first() {
                Some(p) if p.contains("sweep stopped") => Err(CliError::NonConvergence(p.clone())),
                Some(p) => Err(CliError::Invariant(p.clone())),
                None => Ok(()),
            }
        }
        Command::Scurve { t_samples, scenarios } => emit(&commands::scurve(&load(&scenarios)?, t_samples)?, out),
        Command::Profile { dstar_grid, scenarios } => emit(&commands::profile(&load(&scenarios)?, &dstar_grid)?, out),
        Command::Barrier { dt, horizon, opponent, defender, scenarios } => {
            let side = match defender {
                Defender::Evader => Side::Evader,
                Defender::Pursuer => Side::Pursuer,
            };
            let (t, summaries) = commands::barrier(&load(&scenarios)?, dt, horizon, &opponent, side)?;
            emit(&t, out)?;
            let mut err = std::io::stderr().lock();
            for s in summaries {
                let occ = s.occluded_at.map(|t| format!(" occluded_at={t:.6}")).unwrap_or_default();
                writeln!(
                    err,
                    "{}/{}: on_barrier={} dt={:.3e} max_drift={:.6e}{occ}",
                    s.scenario, s.state, s.on_barrier, s.dt, s.max_drift
                )?;
            }
            Ok(())
        }
        Command::Sweep { n, tol, out: dump, scenarios } => {
            let (t, reports) = commands::sweep(&load(&scenarios)?, n, tol, dump.as_deref())?;
            emit(&t, out)?;
            let mut err = std::io::stderr().lock();
            let mut failure = None;
            for r in &reports {
                writeln!(
                    err,
                    "{}: cells={} converged={} cycles={} last_change={:.3e} nested={}{}",
                    r.scenario,
                    r.cells,
                    r.converged,
                    r.cycles,
                    r.last_change,
                    r.nested,
                    r.dump.as_ref().map(|p| format!(" dump={}", p.display())).unwrap_or_default()
                )?;
                if failure.is_none() && !r.converged {
                    failure = Some(CliError::NonConvergence(format!("{}: stopped after {} cycles", r.scenario, r.cycles)));
                }
                if failure.is_none() && !r.nested {
                    failure = Some(CliError::Invariant(format!("{}: fronts do not nest", r.scenario)));
                }
            }
            failure.map_or(Ok(()), Err)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("OCCLUSION_WORKERS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("occlusion: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

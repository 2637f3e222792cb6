use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quasispec_cli::commands::{self, CommandError};
use quasispec_cli::config::ExperimentConfig;
use quasispec_cli::verify::run_verify;

/// Spectral toolkit for quasi-periodic Schrödinger operators with
/// periodically modulated coupling.
#[derive(Parser)]
#[command(name = "quasispec", version, about)]
struct Cli {
    /// Worker threads (default: machine parallelism; the environment
    /// variable QUASISPEC_THREADS is the fallback).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

/// Options shared by every experiment subcommand.
#[derive(Args)]
struct CommonArgs {
    /// Config file in the flat key-value format; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Coupling scalar lambda.
    #[arg(long)]
    lambda: Option<f64>,

    /// Periodic coupling sequence, comma separated, e.g. "1,-1".
    #[arg(long)]
    coupling: Option<String>,

    /// Frequency alpha = omega/2pi: decimal, "golden", "sqrt2", "p/q",
    /// "cf:[a1,a2,...]" or "liouville:N".
    #[arg(long, visible_alias = "frequency")]
    alpha: Option<String>,

    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Emit JSON instead of CSV.
    #[arg(long)]
    json: bool,

    /// Extra key=value overrides for any config key.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Lyapunov exponent sweep over an energy grid.
    Lyapunov {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        e_min: Option<f64>,
        #[arg(long)]
        e_max: Option<f64>,
        #[arg(long)]
        e_count: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        m_max_exp: Option<u32>,
    },
    /// Coupling lower bound against swept exponent estimates.
    Herman {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        e_count: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Band spectrum of a rational-frequency approximant, its measure, and
    /// the truncated-matrix cross-check.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        theta_grid: Option<usize>,
        #[arg(long)]
        e_resolution: Option<f64>,
        #[arg(long)]
        sites: Option<usize>,
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Continued-fraction expansion, convergents and the beta exponent.
    Cf {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Periodic-approximant block diagnostics per convergent level.
    Gordon {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        energy: Option<f64>,
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Small-divisor conjugation of the two-step block near zero energy.
    Cohomology {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        energy: Option<f64>,
    },
    /// Alternating couplings against the frequency-shifted constant model.
    Equivalence {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the acceptance suite and write deterministic artifacts.
    Verify {
        /// Output directory for the artifact tables.
        #[arg(long, default_value = "verify-out")]
        out: PathBuf,
        /// Subset of criteria to run, e.g. "3,4,6" (default: all).
        #[arg(long)]
        criteria: Option<String>,
    },
}

fn build_config(common: &CommonArgs) -> Result<ExperimentConfig, CommandError> {
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::from_file(path)
            .map_err(|e| CommandError::Config(format!("{}: {e}", path.display())))?,
        None => ExperimentConfig::default(),
    };
    if let Some(lambda) = common.lambda {
        config.lambda = lambda;
    }
    if let Some(coupling) = &common.coupling {
        config.set("coupling", coupling).map_err(CommandError::from)?;
    }
    if let Some(alpha) = &common.alpha {
        config.set("frequency", alpha).map_err(CommandError::from)?;
    }
    for pair in &common.set {
        let (key, value) = pair.split_once('=').ok_or_else(|| {
            CommandError::Config(format!("--set expects KEY=VALUE, got '{pair}'"))
        })?;
        config
            .set(key.trim(), value.trim())
            .map_err(CommandError::from)?;
    }
    config.json |= common.json;
    Ok(config)
}

fn threads_from(cli_threads: Option<usize>) -> Option<usize> {
    cli_threads.or_else(|| {
        std::env::var("QUASISPEC_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    })
}

fn emit(
    report: quasispec_cli::output::Report,
    out: Option<&std::path::Path>,
    json: bool,
) -> Result<(), CommandError> {
    report
        .emit(out, json)
        .map_err(|e| CommandError::Config(format!("write output: {e}")))
}

fn dispatch(cli: Cli) -> Result<(), CommandError> {
    if let Some(n) = threads_from(cli.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CommandError::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Lyapunov {
            common,
            e_min,
            e_max,
            e_count,
            grid,
            m_max_exp,
        } => {
            let mut config = build_config(&common)?;
            config.energy_min = e_min.or(config.energy_min);
            config.energy_max = e_max.or(config.energy_max);
            if let Some(n) = e_count {
                config.energy_count = n;
            }
            if let Some(g) = grid {
                config.grid = g;
            }
            if let Some(exp) = m_max_exp {
                config.schedule_max_exp = exp;
            }
            let report = commands::run_lyapunov(&config)?;
            emit(report, common.out.as_deref(), config.json)
        }
        Command::Herman {
            common,
            e_count,
            grid,
        } => {
            let mut config = build_config(&common)?;
            if let Some(n) = e_count {
                config.energy_count = n;
            }
            if let Some(g) = grid {
                config.grid = g;
            }
            let report = commands::run_herman(&config)?;
            emit(report, common.out.as_deref(), config.json)
        }
        Command::Spectrum {
            common,
            theta_grid,
            e_resolution,
            sites,
            theta,
        } => {
            let mut config = build_config(&common)?;
            if let Some(g) = theta_grid {
                config.theta_grid = g;
            }
            if let Some(r) = e_resolution {
                config.e_resolution = r;
            }
            if let Some(n) = sites {
                config.sites = n;
            }
            if let Some(t) = theta {
                config.theta = t;
            }
            let report = commands::run_spectrum(&config)?;
            emit(report, common.out.as_deref(), config.json)
        }
        Command::Cf { common, terms } => {
            let mut config = build_config(&common)?;
            if let Some(terms) = terms {
                config.cf_terms = terms;
            }
            let report = commands::run_cf(&config)?;
            emit(report, common.out.as_deref(), config.json)
        }
        Command::Gordon {
            common,
            levels,
            energy,
            theta,
        } => {
            let mut config = build_config(&common)?;
            if let Some(levels) = levels {
                config.levels = levels;
            }
            if let Some(e) = energy {
                config.energy = e;
            }
            if let Some(t) = theta {
                config.theta = t;
            }
            let report = commands::run_gordon(&config)?;
            emit(report, common.out.as_deref(), config.json)
        }
        Command::Cohomology { common, energy } => {
            let mut config = build_config(&common)?;
            if let Some(e) = energy {
                config.energy = e;
            }
            let report = commands::run_cohomology(&config)?;
            emit(report, common.out.as_deref(), config.json)
        }
        Command::Equivalence {
            common,
            steps,
            samples,
            seed,
        } => {
            let mut config = build_config(&common)?;
            if let Some(m) = steps {
                config.steps = m;
            }
            if let Some(n) = samples {
                config.samples = n;
            }
            if let Some(s) = seed {
                config.seed = s;
            }
            let report = commands::run_equivalence(&config)?;
            emit(report, common.out.as_deref(), config.json)
        }
        Command::Verify { out, criteria } => {
            let select: Vec<usize> = match criteria {
                Some(list) => list
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| CommandError::Config(format!("bad criterion id '{s}'")))
                    })
                    .collect::<Result<_, _>>()?,
                None => Vec::new(),
            };
            let ok = run_verify(&out, &select)
                .map_err(|e| CommandError::Config(format!("verify artifacts: {e}")))?;
            if ok {
                Ok(())
            } else {
                Err(CommandError::Numeric("acceptance criteria failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CommandError::Numeric(msg)) => {
            eprintln!("quasispec: {msg}");
            ExitCode::from(1)
        }
        Err(CommandError::Config(msg)) => {
            eprintln!("quasispec: {msg}");
            ExitCode::from(2)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sr_bandits::harness::{self, ExperimentConfig};
use sr_bandits::Error;

/// Run spatial-reuse bandit experiments and write CSV results.
#[derive(Parser, Debug)]
#[command(name = "srsim", version)]
struct Cli {
    /// Flat key=value config file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// grid | random | dynamic
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    n_wns: Option<String>,
    /// egreedy | exp3 | ucb | thompson | static
    #[arg(long)]
    policy: Option<String>,
    /// concurrent | sequential
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    iterations: Option<String>,
    #[arg(long)]
    reps: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    eps0: Option<String>,
    #[arg(long)]
    eta0: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    /// Path-loss exponent.
    #[arg(long)]
    alpha: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// Write one trace CSV per repetition.
    #[arg(long)]
    trace: bool,
    /// Compute the PF optimum and fill the pf_fraction column.
    #[arg(long)]
    oracle: bool,
    /// Write per-WN arm frequencies.
    #[arg(long)]
    histogram: bool,
    /// Run repetitions on a single thread.
    #[arg(long)]
    serial: bool,
    /// Tuning sweep over eps0 (egreedy) or eta0 (exp3): `start:end:step` or a comma list.
    #[arg(long)]
    sweep: Option<String>,
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    let pairs = [
        ("scenario", &cli.scenario),
        ("n_wns", &cli.n_wns),
        ("policy", &cli.policy),
        ("mode", &cli.mode),
        ("iterations", &cli.iterations),
        ("reps", &cli.reps),
        ("seed", &cli.seed),
        ("eps0", &cli.eps0),
        ("eta0", &cli.eta0),
        ("gamma", &cli.gamma),
        ("alpha", &cli.alpha),
        ("out", &cli.out),
        ("sweep", &cli.sweep),
    ];
    for (key, value) in pairs {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    cfg.trace |= cli.trace;
    cfg.oracle |= cli.oracle;
    cfg.histogram |= cli.histogram;
    if cli.serial {
        cfg.parallel = false;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = build_config(&cli).and_then(|cfg| match &cfg.sweep {
        Some(values) => harness::run_sweep(&cfg, values).map(|p| vec![p]),
        None => harness::run_experiment(&cfg),
    });
    match result {
        Ok(paths) => {
            for p in paths.iter().take(1) {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("srsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

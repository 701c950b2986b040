use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use randorder_harness::config::{parse_k_list, ExperimentConfig};
use randorder_harness::experiment::write_csv_file;
use randorder_harness::{run_experiment, EstimatorKind, Family, HarnessError, Mode};

/// Monte Carlo runs of memory-bounded selection and secretary algorithms.
#[derive(Debug, Parser)]
#[command(name = "randorder", version)]
struct Cli {
    /// key=value file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long)]
    n: Option<usize>,
    /// Target rank, or a comma-separated sweep such as 64,256.
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    c0: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    instance: Option<Family>,
    /// Threshold estimator used in secretary mode.
    #[arg(long, value_enum)]
    estimator: Option<EstimatorKind>,
    #[arg(long)]
    eps: Option<f64>,
    /// Per-trial CSV destination.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn resolve(cli: Cli) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(v) = cli.mode {
        cfg.mode = v;
    }
    if let Some(v) = cli.n {
        cfg.n = v;
    }
    if let Some(v) = &cli.k {
        cfg.ks = parse_k_list(v)?;
    }
    if cli.m.is_some() {
        cfg.m = cli.m;
    }
    if let Some(v) = cli.c0 {
        cfg.c0 = v;
    }
    if let Some(v) = cli.trials {
        cfg.trials = v;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.instance {
        cfg.family = v;
    }
    if let Some(v) = cli.estimator {
        cfg.estimator = v;
    }
    if let Some(v) = cli.eps {
        cfg.eps = v;
    }
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    let cfg = resolve(cli)?;
    let results = run_experiment(&cfg)?;
    if let Some(path) = &cfg.out {
        write_csv_file(cfg.mode, &results, path)?;
    }
    for r in &results {
        println!("k={}", r.k);
        println!("m={}", r.m);
        println!("{}", r.summary);
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stabsim_core::harness::{list, run_experiment, Catalog, ExperimentConfig, ExperimentKind};
use stabsim_core::{Distribution, Error, Learner};

/// Replace-one stability estimates, generalization bounds and tail experiments.
#[derive(Parser, Debug)]
#[command(name = "stabsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate the notions in [stability] (estimates.csv).
    Estimate(RunArgs),
    /// Mean generalization error, direct and via replace-one (mu.csv, mu_check.csv).
    Mu(RunArgs),
    /// Weak difference bound of the [wdb] statistic (wdb.csv).
    Wdb(RunArgs),
    /// Empirical tail of gen(S) against the tail bounds (tail.csv).
    Concentration(RunArgs),
    /// cv stability delta over [decay].m_grid with log fits (decay.csv).
    Decay(RunArgs),
    /// Evaluate the closed-form bounds at the [bounds] parameters (bounds.csv).
    Bounds(RunArgs),
    /// Print a catalog.
    List {
        #[arg(value_enum)]
        catalog: CatalogArg,
    },
    /// Run every experiment listed in the config's `experiments`.
    Report(RunArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// TOML experiment config; threshold_midpoint on uniform_threshold when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trials per estimate (overrides the config).
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads, 0 for one per core (overrides the config).
    #[arg(long)]
    threads: Option<usize>,
    /// Print nothing on success.
    #[arg(long)]
    quiet: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CatalogArg {
    Learners,
    Distributions,
    Notions,
    Bounds,
    Experiments,
}

fn load(args: &RunArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::new(Learner::ThresholdMidpoint, Distribution::uniform_threshold(0.5)),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out = out.clone();
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(threads) = args.threads {
        cfg.threads = threads;
    }
    Ok(cfg)
}

fn run(args: &RunArgs, kinds: Option<&[ExperimentKind]>) -> Result<(), Error> {
    let cfg = load(args)?;
    let kinds = kinds.map(<[_]>::to_vec).unwrap_or_else(|| cfg.experiments.clone());
    let (out, paths) = run_experiment(&cfg, &kinds)?;
    if !args.quiet {
        for line in &out.report {
            println!("{line}");
        }
        for note in &out.notes {
            println!("note: {note}");
        }
        for p in &paths {
            println!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Estimate(a) => run(a, Some(&[ExperimentKind::Estimate])),
        Command::Mu(a) => run(a, Some(&[ExperimentKind::Mu])),
        Command::Wdb(a) => run(a, Some(&[ExperimentKind::Wdb])),
        Command::Concentration(a) => run(a, Some(&[ExperimentKind::Concentration])),
        Command::Decay(a) => run(a, Some(&[ExperimentKind::Decay])),
        Command::Bounds(a) => run(a, Some(&[ExperimentKind::Bounds])),
        Command::Report(a) => run(a, None),
        Command::List { catalog } => {
            let c = match catalog {
                CatalogArg::Learners => Catalog::Learners,
                CatalogArg::Distributions => Catalog::Distributions,
                CatalogArg::Notions => Catalog::Notions,
                CatalogArg::Bounds => Catalog::Bounds,
                CatalogArg::Experiments => Catalog::Experiments,
            };
            for e in list(c) {
                println!("{}\t{}", e.name, e.detail);
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 3 })
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use meander::config::ExperimentConfig;
use meander::experiments::{self, EXPERIMENT_NAMES};
use meander::selftest;

#[derive(Parser)]
#[command(name = "meander", about = "Heavy-tailed renewal experiments", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a JSON config and write CSV outputs.
    Run {
        /// Path to the experiment configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Fix the worker thread count (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Override the seed from the config file.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the available experiment names.
    ListExperiments,
    /// Run fast built-in sanity checks.
    Selftest,
}

// exit codes: 0 success, 1 at least one check failed,
// 2 configuration error, 3 runtime error
fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, threads, seed } => run(&config, threads, seed),
        Command::ListExperiments => {
            for name in EXPERIMENT_NAMES {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Selftest => {
            let checks = selftest::run_selftests();
            let mut all_ok = true;
            for c in &checks {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                println!("{verdict} {} ({})", c.name, c.detail);
                all_ok &= c.passed;
            }
            if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
    }
}

fn run(config: &PathBuf, threads: Option<usize>, seed: Option<u64>) -> ExitCode {
    let mut cfg = match ExperimentConfig::from_file(config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let out = match experiments::run_experiment(&cfg, threads) {
        Ok(out) => out,
        Err(meander::Error::Config(e)) => {
            eprintln!("error: invalid configuration: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    let (raw_path, report_path) = match experiments::write_outputs(&cfg, &out) {
        Ok(paths) => paths,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    for r in &out.reports {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {} statistic={:.6e} threshold={:.6e}",
            r.description, r.statistic, r.threshold
        );
    }
    println!("raw: {}", raw_path.display());
    println!("report: {}", report_path.display());
    if out.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) }
}

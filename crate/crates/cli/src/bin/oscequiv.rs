use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use oscequiv_cli::{parse_scenario, run, RunOptions, Scenario};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "oscequiv", version, about = "Run oscillator-equivalence verification scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more scenario files.
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        /// Evaluate checks without writing artifacts.
        #[arg(long)]
        check_only: bool,
        /// Artifact root; overrides `[output] dir` in the scenarios.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Worker threads for the scenario pool (default: all cores).
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        threads: Option<u16>,
        /// Multiply every tolerance by this factor.
        #[arg(long, default_value_t = 1.0, value_parser = positive)]
        tolerance_scale: f64,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got {s}")),
    }
}

fn main() -> ExitCode {
    let Command::Run { configs, check_only, out_dir, threads, tolerance_scale } = Cli::parse().command;

    let mut scenarios: Vec<Scenario> = Vec::with_capacity(configs.len());
    for path in &configs {
        match parse_scenario(path) {
            Ok(s) => scenarios.push(s),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    scenarios.sort_by(|a, b| a.name.cmp(&b.name));
    if let Some(w) = scenarios.windows(2).find(|w| w[0].name == w[1].name) {
        eprintln!("error: scenario name `{}` appears more than once", w[0].name);
        return ExitCode::from(2);
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        pool = pool.num_threads(n as usize);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions { check_only, out_dir, tolerance_scale };
    let results: Vec<_> = pool.install(|| scenarios.par_iter().map(|s| run(s, &opts)).collect());

    let mut failed = false;
    for r in results {
        match r {
            Ok(report) => {
                print!("{report}");
                failed |= !report.passed();
            }
            Err(e) => {
                eprintln!("error: {e}");
                failed = true;
            }
        }
    }
    if failed { ExitCode::from(1) } else { ExitCode::SUCCESS }
}

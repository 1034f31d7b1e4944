use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use secbeam::{cmd_campaign, cmd_solve, run_validation, Overrides, ValidationOptions};

#[derive(Parser)]
#[command(
    name = "secbeam",
    about = "Robust secure layered-video beamforming: single solves, Monte-Carlo campaigns, validation suite"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one channel realization with the configured schemes.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Override the configuration's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory (default: out/).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the configured parameter sweep and write the metrics CSV.
    Campaign {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the per-point trial count.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Run the property suite; exits 0 only if every property passes.
    Validate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Deliberately flip a sign inside the eavesdropper LMI to prove
        /// the soundness properties can fail.
        #[arg(long)]
        inject_sign_flip: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve {
            config,
            seed,
            threads,
            out,
        } => {
            let overrides = Overrides {
                seed,
                threads,
                out_dir: out,
                trials: None,
            };
            match cmd_solve(&config, &overrides) {
                Ok(outcome) => {
                    println!("{}", outcome.summary);
                    ExitCode::from(outcome.exit_code as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Campaign {
            config,
            seed,
            threads,
            out,
            trials,
        } => {
            let overrides = Overrides {
                seed,
                threads,
                out_dir: out,
                trials,
            };
            match cmd_campaign(&config, &overrides) {
                Ok(outcome) => {
                    println!("{}", outcome.summary);
                    ExitCode::from(outcome.exit_code as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Validate {
            seed,
            inject_sign_flip,
        } => {
            let results = run_validation(&ValidationOptions {
                seed,
                inject_c4_sign_flip: inject_sign_flip,
            });
            let mut failures = 0;
            for r in &results {
                match &r.outcome {
                    Ok(()) => println!("PASS {}", r.name),
                    Err(msg) => {
                        failures += 1;
                        println!("FAIL {}: {msg}", r.name);
                    }
                }
            }
            println!(
                "{} of {} properties passed",
                results.len() - failures,
                results.len()
            );
            if failures == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}

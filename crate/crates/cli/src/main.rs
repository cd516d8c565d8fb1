//! Command-line front end: generate instances, certify their clusterings,
//! and recover them with simulated oracle queries.
//!
//! Exit codes: 0 success, 1 input error, 2 convexity violation, 3 recovery
//! mismatch or failure. Errors go to stderr as one-line JSON objects.

mod commands;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "gclust",
    version,
    about = "Generate, certify, and recover convex clusterings with simulated oracles",
    disable_help_subcommand = true
)]
pub(crate) struct Cli {
    #[command(subcommand)]
    pub(crate) cmd: Cmd,
}

#[derive(Subcommand)]
pub(crate) enum Cmd {
    /// Generate an instance file from a named family.
    Gen {
        /// Family name, e.g. random-convex, oort, violate-margin.
        #[arg(long)]
        family: String,
        /// Point count; families with a fixed size ignore it.
        #[arg(long)]
        n: Option<usize>,
        /// Cluster count; families with a fixed count ignore it.
        #[arg(long)]
        k: Option<usize>,
        /// Generator RNG seed.
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Instance file to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify the declared clustering of an instance file.
    Check {
        /// Instance file to read.
        #[arg(long)]
        instance: PathBuf,
        /// Use the per-cluster hereditary checker even for a shared radius.
        #[arg(long)]
        generalized: bool,
    },
    /// Recover the clustering with oracle queries and compare to the truth.
    Recover {
        /// Instance file to read.
        #[arg(long)]
        instance: PathBuf,
        /// identical | multi | learn-radii | guess-beta | guess-gamma
        #[arg(long)]
        mode: String,
        /// first-by-id | adversarial-minmax
        #[arg(long, default_value = "first-by-id")]
        seed_policy: String,
        /// Confirm candidate equality with extra per-cluster seed probes
        /// (guess modes only).
        #[arg(long)]
        paranoid_equality: bool,
        /// Run free diagnostic assertions on every separator input.
        #[arg(long)]
        debug_checks: bool,
        /// Rebuild seed-discovery state from scratch every round instead of
        /// amortizing it.
        #[arg(long)]
        naive_discovery: bool,
        /// Also write the report JSON to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Learn per-cluster radii with seed queries only.
    LearnRadii {
        /// Instance file to read.
        #[arg(long)]
        instance: PathBuf,
        /// first-by-id | adversarial-minmax
        #[arg(long, default_value = "first-by-id")]
        seed_policy: String,
        /// Also write the report JSON to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run a suite of generated instances and write one CSV of counts.
    Bench {
        /// Suite description file.
        #[arg(long)]
        suite: PathBuf,
        /// Directory for bench.csv.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                print!("{e}");
                std::process::exit(0);
            }
            _ => {
                commands::emit_error("input", e.to_string().trim_end());
                std::process::exit(1);
            }
        },
    };
    std::process::exit(commands::run(cli));
}

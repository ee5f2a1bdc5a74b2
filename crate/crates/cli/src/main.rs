//! Command-line surface for the quiver mutation laboratory.
//!
//! Exit codes: 0 on success, 1 for mathematically meaningful failures
//! (an invariance witness, a variation along a watched orbit, an aborted
//! search), 2 for usage and file-format problems.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "quiver-lab",
    version,
    about = "Exact-arithmetic laboratory for cluster mutations of skew-symmetric matrices"
)]
struct Cli {
    /// Emit a machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a mutation sequence to a quiver file, printing the sign
    /// pattern trail and (for even n) the Pfaffian per step.
    Mutate {
        /// Quiver JSON file: {"n": 4, "upper": ["1", "-3/2", ...]}.
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        /// Comma-separated vertices, applied left to right (may be empty).
        #[arg(long, default_value = "", value_name = "K1,K2,...")]
        seq: String,
        /// Write the mutated quiver here.
        #[arg(long, value_name = "FILE")]
        out: Option<String>,
    },
    /// Connected components of the flip graph on sign patterns.
    CarriageGraph {
        #[arg(long)]
        n: usize,
        /// List each component's size and lexicographically least pattern.
        #[arg(long)]
        components: bool,
        /// Largest n the graph is built for.
        #[arg(long, default_value_t = quiver_lab::flip_graph::DEFAULT_CAP)]
        cap: usize,
    },
    /// Symbolically verify a carriage-wise polynomial invariant.
    Check {
        /// "det", "markov", or a path to an invariant JSON file.
        #[arg(long, value_name = "NAME|FILE")]
        invariant: String,
    },
    /// Search for all invariants up to a degree bound and write the
    /// verified basis.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: u32,
        /// "collapsed" (one piece per flip component) or "full".
        #[arg(long, default_value = "collapsed")]
        mode: String,
        /// Write the verified basis file here.
        #[arg(long, value_name = "FILE")]
        out: Option<String>,
        /// Discover candidates from evaluation constraints first; the
        /// result is verified symbolically either way.
        #[arg(long)]
        sample_prepass: bool,
        /// Bypass the resource guard.
        #[arg(long)]
        force: bool,
    },
    /// Random mutation walk, watching invariants along the orbit.
    Orbit {
        /// Quiver JSON file to start from.
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        #[arg(long, default_value_t = 0)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// "det", "markov", or a path to an invariant JSON file (repeatable).
        #[arg(long, value_name = "NAME|FILE")]
        watch: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Mutate { input, seq, out } => {
            commands::mutate(&input, &seq, out.as_deref(), cli.json)
        }
        Command::CarriageGraph { n, components, cap } => {
            commands::carriage_graph(n, components, cap, cli.json)
        }
        Command::Check { invariant } => commands::check(&invariant, cli.json),
        Command::Search {
            n,
            degree,
            mode,
            out,
            sample_prepass,
            force,
        } => commands::search(
            n,
            degree,
            &mode,
            out.as_deref(),
            sample_prepass,
            force,
            cli.json,
        ),
        Command::Orbit {
            input,
            steps,
            seed,
            watch,
        } => commands::orbit(&input, steps, seed, &watch, cli.json),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

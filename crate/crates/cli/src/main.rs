use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ramsey_closure::config::ExperimentConfig;
use ramsey_closure::Command;

#[derive(Parser)]
#[command(name = "ramsey-closure", version, about = "Exact experiments on colorings of the rationals")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Encode and decode the first N non-seed points.
    EncodeSweep(Flags),
    /// Search the first N points for a monochromatic set.
    SearchMono(Flags),
    /// Run the counterexample verifiers.
    VerifyClaims(Flags),
    /// Check the 6-point and pentagon facts.
    RamseySanity(Flags),
    /// Encode one point and log every step.
    Trace(Flags),
}

#[derive(Args)]
struct Flags {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    coloring: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cap: Option<u64>,
    /// Report path, or `-` for standard output.
    #[arg(long)]
    out: Option<String>,
    /// Point to trace, as `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match cli.command {
        Cmd::EncodeSweep(f) => (Command::EncodeSweep, f),
        Cmd::SearchMono(f) => (Command::SearchMono, f),
        Cmd::VerifyClaims(f) => (Command::VerifyClaims, f),
        Cmd::RamseySanity(f) => (Command::RamseySanity, f),
        Cmd::Trace(f) => (Command::Trace, f),
    };
    let overrides = ExperimentConfig {
        n: flags.n,
        coloring: flags.coloring,
        seed: flags.seed,
        cap: flags.cap,
        out: flags.out,
        point: flags.point,
        ..Default::default()
    };
    ExitCode::from(ramsey_closure::run(command, flags.config.as_deref(), overrides))
}

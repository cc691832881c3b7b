//! Experiment runner over `ramsey-closure-core`: config loading, the batch
//! commands, report writing, and the JSON trace format.

pub mod commands;
pub mod config;
pub mod report;
pub mod samples;
pub mod trace_json;

use std::fs::File;
use std::io::{self, BufWriter};
use std::path::Path;
use std::time::Instant;

use config::{ExperimentConfig, Settings};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    EncodeSweep,
    SearchMono,
    VerifyClaims,
    RamseySanity,
    Trace,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::EncodeSweep => "encode-sweep",
            Command::SearchMono => "search-mono",
            Command::VerifyClaims => "verify-claims",
            Command::RamseySanity => "ramsey-sanity",
            Command::Trace => "trace",
        }
    }
}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Loads the config, applies `flags` on top, runs `command` and writes the
/// report. Returns the process exit code: 0 when every check passed, 1 on
/// any failure, 2 on a config or usage problem (no report is written).
pub fn run(command: Command, config_path: Option<&Path>, flags: ExperimentConfig) -> u8 {
    let file = match config_path {
        Some(path) => match ExperimentConfig::load(path) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        },
        None => ExperimentConfig::default(),
    };
    let settings = match Settings::resolve(command, file.overlay(flags)) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };

    let start = Instant::now();
    let rendered = match commands::execute(command, &settings) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {} failed: {e:#}", command.name());
            return EXIT_FAIL;
        }
    };
    let elapsed = start.elapsed().as_millis();

    let written = match settings.out.as_deref() {
        None | Some("-") => rendered.write_to(io::stdout().lock(), elapsed),
        Some(path) => match File::create(path) {
            Ok(f) => rendered.write_to(BufWriter::new(f), elapsed),
            Err(e) => {
                eprintln!("error: cannot create {path}: {e}");
                return EXIT_USAGE;
            }
        },
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return EXIT_FAIL;
    }
    if rendered.passed {
        EXIT_PASS
    } else {
        eprintln!("{}: one or more checks failed", command.name());
        EXIT_FAIL
    }
}

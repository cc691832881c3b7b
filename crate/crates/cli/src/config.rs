//! Experiment configuration.
//!
//! A config is one JSON document. Command-line flags override the matching
//! fields; anything left unset falls back to a per-command default.

use std::path::Path;

use ramsey_closure_core::coloring::ColoringSpec;
use ramsey_closure_core::space::{enumerate, rank};
use ramsey_closure_core::Rational;
use serde::{Deserialize, Serialize};

use crate::Command;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

/// The config file as written. Every field is optional.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub space: Option<String>,
    pub coloring: Option<String>,
    /// Arity, for the synthetic colorings.
    pub k: Option<usize>,
    /// Number of colors, for the synthetic colorings.
    pub c: Option<usize>,
    pub seed: Option<u64>,
    pub n: Option<u64>,
    pub cap: Option<u64>,
    pub point: Option<String>,
    pub m: Option<usize>,
    pub epsilons: Option<Vec<String>>,
    pub hub_sets: Option<usize>,
    pub clusters: Option<usize>,
    pub out: Option<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Fields set in `flags` win.
    pub fn overlay(mut self, flags: ExperimentConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if flags.$f.is_some() { self.$f = flags.$f; } )* };
        }
        take!(space, coloring, k, c, seed, n, cap, point, m, epsilons, hub_sets, clusters, out);
        self
    }
}

/// Fully resolved settings, echoed into every report. The output path is
/// left out so that the report does not depend on where it is written.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Settings {
    pub space: String,
    pub coloring: String,
    pub k: usize,
    pub c: usize,
    pub seed: u64,
    pub n: u64,
    pub cap: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub epsilons: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hub_sets: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clusters: Option<usize>,
    #[serde(skip)]
    pub out: Option<String>,
}

pub const DEFAULT_CAP: u64 = 10_000;

impl Settings {
    pub fn resolve(command: Command, cfg: ExperimentConfig) -> Result<Self, ConfigError> {
        let space = cfg.space.unwrap_or_else(|| "rationals".into());
        if space != "rationals" {
            return Err(invalid(format!("unsupported space {space:?}; only \"rationals\" is available")));
        }
        let coloring = cfg.coloring.unwrap_or_else(|| "sierpinski-pair".into());
        let seed = cfg.seed.unwrap_or(0);
        let (k, c) = match coloring.as_str() {
            "sierpinski-pair" => (2, 2),
            "distance-triple" | "rank-hat-triple" => (3, 2),
            "constant" | "seeded-random" => (cfg.k.unwrap_or(2), cfg.c.unwrap_or(2)),
            other => {
                return Err(invalid(format!(
                    "unknown coloring {other:?}; expected one of {}",
                    ColoringSpec::NAMES.join(", ")
                )))
            }
        };
        if cfg.k.is_some_and(|given| given != k) || cfg.c.is_some_and(|given| given != c) {
            return Err(invalid(format!("{coloring} has fixed k = {k} and c = {c}")));
        }
        // validates k and c for the synthetic colorings
        ColoringSpec::from_name(&coloring, k, c, seed).map_err(|e| invalid(e.to_string()))?;

        let n = cfg.n.unwrap_or(match command {
            Command::EncodeSweep => 300,
            Command::SearchMono => 20,
            Command::VerifyClaims => 40,
            Command::RamseySanity | Command::Trace => 0,
        });
        let cap = cfg.cap.unwrap_or(DEFAULT_CAP);
        if cap == 0 {
            return Err(invalid("cap must be positive"));
        }

        let mut settings = Settings {
            space,
            coloring,
            k,
            c,
            seed,
            n,
            cap,
            point: None,
            m: None,
            epsilons: Vec::new(),
            hub_sets: None,
            clusters: None,
            out: cfg.out,
        };
        match command {
            Command::EncodeSweep => {
                if n == 0 {
                    return Err(invalid("n must be positive"));
                }
            }
            Command::Trace => {
                let x = match (&cfg.point, n) {
                    (Some(p), _) => parse_point(p)?,
                    (None, 0) => return Err(invalid("trace needs a point or a rank n")),
                    (None, n) => enumerate(n),
                };
                if rank(&x) < k as u64 {
                    return Err(invalid(format!(
                        "{x} is one of the first {} enumerated points, which seed the encoder",
                        k - 1
                    )));
                }
                settings.point = cfg.point.as_ref().map(|_| x.to_string());
            }
            Command::SearchMono => {
                let m = cfg.m.unwrap_or(k + 2);
                if m < k {
                    return Err(invalid(format!("m = {m} is below the arity {k}")));
                }
                if (n as usize) < m {
                    return Err(invalid(format!("n = {n} points cannot hold a set of size {m}")));
                }
                let eps = cfg.epsilons.unwrap_or_default();
                let parsed: Vec<Rational> = eps.iter().map(|e| parse_point(e)).collect::<Result<_, _>>()?;
                if parsed.iter().any(|e| !e.is_positive()) || parsed.windows(2).any(|w| w[1] > w[0]) {
                    return Err(invalid("epsilons must be positive and non-increasing"));
                }
                settings.m = Some(m);
                settings.epsilons = parsed.iter().map(ToString::to_string).collect();
            }
            Command::VerifyClaims => {
                if n < 4 {
                    return Err(invalid("verify-claims needs n >= 4"));
                }
                settings.hub_sets = Some(cfg.hub_sets.unwrap_or(100));
                settings.clusters = Some(cfg.clusters.unwrap_or(50));
            }
            Command::RamseySanity => {}
        }
        Ok(settings)
    }

    pub fn coloring_spec(&self) -> ColoringSpec {
        ColoringSpec::from_name(&self.coloring, self.k, self.c, self.seed)
            .expect("validated during resolve")
    }
}

fn parse_point(text: &str) -> Result<Rational, ConfigError> {
    text.parse()
        .map_err(|e| invalid(format!("{text:?} is not a rational: {e}")))
}

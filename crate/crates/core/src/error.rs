use alloc::string::String;
use core::fmt;

use crate::ramsey::MonotoneViolation;
use crate::Rational;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Which cluster of a two-limit-point instance ran short of members.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClusterSide {
    Lower,
    Upper,
}

impl fmt::Display for ClusterSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClusterSide::Lower => f.write_str("lower"),
            ClusterSide::Upper => f.write_str("upper"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("expected a {expected}-element subset, got {found} points")]
    Arity { expected: usize, found: usize },

    #[error("point {0} appears more than once")]
    DuplicatePoint(Rational),

    #[error("anchor {0} is already a member of the evaluated subset")]
    AnchorInSubset(Rational),

    #[error("color {color} outside the declared range 0..{colors}")]
    ColorOutOfRange { color: usize, colors: usize },

    #[error("subset {0} is outside the coloring's domain")]
    OutsideDomain(String),

    #[error("ball radius must be strictly positive, got {0}")]
    NonPositiveRadius(Rational),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("point {0} is one of the seed points and has no encoding")]
    SeedPoint(Rational),

    #[error("malformed trace: {0}")]
    MalformedTrace(String),

    #[error("trace replay is inconsistent at step {step}: {reason}")]
    Inconsistent { step: usize, reason: String },

    #[error("no member found among the first {cap} enumerated points")]
    SearchCap { cap: u64 },

    #[error("encoded point left the region at step {step}")]
    ChainBroken { step: usize },

    #[error("sequence is not monotone: {0}")]
    NotMonotone(MonotoneViolation),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{side} cluster needs {needed} members, has {found}")]
    Insufficient {
        side: ClusterSide,
        needed: usize,
        found: usize,
    },

    #[error("{0} is not a member of the point set")]
    NotAMember(Rational),

    #[error("internal check failed: {0}")]
    Internal(String),
}

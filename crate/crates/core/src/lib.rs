//! Exact, desk-scale machinery for closed monochromatic subsets of metric spaces.
//!
//! Everything here works over the rationals with exact arithmetic:
//!
//! - [`space`]: the canonical enumeration of ℚ, which doubles as the
//!   well-order used for "minimal element" and as the dense sequence of
//!   ball centers.
//! - [`coloring`]: colorings of k-element subsets, including the three
//!   counterexample colorings on ℚ and the collapse onto a fixed anchor.
//! - [`encoder`]: the point encoder that records ball-center indices and
//!   colors, and the decoder that rebuilds the point from that record alone.
//! - [`ramsey`]: validators for monotone sequences, exhaustive monochromatic
//!   search and the Erdős–Rado extraction.
//! - [`counterexamples`]: constructive verifiers for the colorings that show
//!   why countable spaces and multiple limit points fail.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod coloring;
pub mod counterexamples;
pub mod encoder;
mod error;
pub mod ramsey;
mod rational;
pub mod space;

pub use error::{ClusterSide, Error, Result};
pub use rational::{ParseRationalError, Rational};

/// Outcome of a check that either passes or produces a counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<V> {
    Pass,
    Fail(V),
}

impl<V> Verdict<V> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn failure(&self) -> Option<&V> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(v) => Some(v),
        }
    }
}

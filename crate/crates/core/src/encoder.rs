//! The point encoder and its inverse.
//!
//! For a point `x` outside the first `k - 1` enumerated points, [`encode`]
//! walks the steps `i = k - 1, k, ...`:
//!
//! 1. `theta(i)` is the least `n` with `x` in the open ball `B(Ψ_n, 2^-i)`.
//! 2. For every `(k - 2)`-subset `J` of `{1, ..., i - 1}`, `delta({i} ∪ J)`
//!    records `χ({x, u_i} ∪ {u_j : j ∈ J})`.
//! 3. `U_{i+1}` is `U_i` intersected with the ball and with the neighborhoods
//!    `N_{delta({i} ∪ J)}({u_i} ∪ u_J)`.
//! 4. `u_{i+1}` is the least-ranked member of `U_{i+1}`; the walk stops
//!    when that member is `x` itself.
//!
//! Every step only consults `x` through `theta` and `delta`, so [`decode`]
//! can replay the same regions from the trace alone and read `x` off as the
//! final minimum.
//!
//! On ℚ the walk always stops: every `u_{i+1}` is distinct from the earlier
//! ones and ranked no later than `x`, so there are at most `rank(x)` steps.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use itertools::Itertools;

use crate::coloring::{Color, Coloring, KSubset};
use crate::ramsey::MonotoneSequence;
use crate::space::{Ball, CountableSpace};
use crate::{Error, Rational, Result};

pub const DEFAULT_STEP_CAP: usize = 10_000;

/// Rank bound used by [`decode`] when nothing better is known.
pub const DEFAULT_DECODE_CAP: u64 = 1_000_000;

/// One constraint of a [`Region`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    /// Points `p`, distinct from every anchor, with `χ({p} ∪ anchors) = color`.
    Neighborhood { color: Color, anchors: KSubset },
    Ball(Ball),
}

impl Atom {
    fn admits<C: Coloring + ?Sized>(&self, chi: &C, p: &Rational) -> Result<bool> {
        match self {
            Atom::Ball(b) => Ok(b.contains(p)),
            Atom::Neighborhood { color, anchors } => {
                if anchors.contains(p) {
                    return Ok(false);
                }
                Ok(chi.color(&anchors.with(p)?)? == *color)
            }
        }
    }
}

/// A finite intersection of atoms; the empty intersection is the whole space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Region {
    atoms: Vec<Atom>,
}

impl Region {
    pub fn whole() -> Self {
        Region::default()
    }

    pub fn push(&mut self, atom: Atom) {
        self.atoms.push(atom);
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn contains<C: Coloring + ?Sized>(&self, chi: &C, p: &Rational) -> Result<bool> {
        // balls are cheap and usually the most selective
        for atom in self.atoms.iter().rev() {
            if let Atom::Ball(b) = atom {
                if !b.contains(p) {
                    return Ok(false);
                }
            }
        }
        for atom in self.atoms.iter().rev() {
            if matches!(atom, Atom::Neighborhood { .. }) && !atom.admits(chi, p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The least-ranked member among the first `cap` enumerated points.
    pub fn min_element<S, C>(&self, chi: &C, space: &S, cap: u64) -> Result<Rational>
    where
        S: CountableSpace,
        C: Coloring + ?Sized,
    {
        self.min_element_from(chi, space, 1, cap)
    }

    /// Like [`min_element`](Self::min_element) but skips ranks below
    /// `start`; the caller must know none of them are members.
    pub fn min_element_from<S, C>(&self, chi: &C, space: &S, start: u64, cap: u64) -> Result<Rational>
    where
        S: CountableSpace,
        C: Coloring + ?Sized,
    {
        if start <= cap {
            for (_, p) in space.points_from(start).take((cap - start + 1) as usize) {
                if self.contains(chi, &p)? {
                    return Ok(p);
                }
            }
        }
        Err(Error::SearchCap { cap })
    }
}

/// The pair `(theta, delta)` plus the step count `s`.
///
/// `theta` is defined on `{k-1, ..., s}`; `delta` on the index sets
/// `J ∪ {i}` (ascending, `i` last) for each step `i` and each
/// `(k-2)`-subset `J` of `{1, ..., i-1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EncodingTrace {
    arity: usize,
    steps: usize,
    theta: BTreeMap<usize, u64>,
    delta: BTreeMap<Vec<usize>, Color>,
}

impl EncodingTrace {
    /// Checks that both maps have exactly the domains the construction
    /// produces.
    pub fn new(
        arity: usize,
        steps: usize,
        theta: BTreeMap<usize, u64>,
        delta: BTreeMap<Vec<usize>, Color>,
    ) -> Result<Self> {
        if arity < 2 {
            return Err(Error::MalformedTrace(format!("arity {arity} is below 2")));
        }
        if steps < arity - 1 {
            return Err(Error::MalformedTrace(format!(
                "{steps} steps is fewer than the first step {}",
                arity - 1
            )));
        }
        let trace = EncodingTrace {
            arity,
            steps,
            theta,
            delta,
        };
        if !trace.theta.keys().copied().eq(trace.step_indices()) {
            return Err(Error::MalformedTrace(format!(
                "theta must be defined exactly on {}..={steps}",
                arity - 1
            )));
        }
        if let Some((i, _)) = trace.theta.iter().find(|(_, &n)| n == 0) {
            return Err(Error::MalformedTrace(format!(
                "theta({i}) = 0; enumeration starts at 1"
            )));
        }
        let expected: Vec<Vec<usize>> = trace
            .step_indices()
            .flat_map(|i| delta_keys(arity, i))
            .sorted()
            .collect();
        if !trace.delta.keys().eq(expected.iter()) {
            return Err(Error::MalformedTrace(
                "delta domain does not match the steps".into(),
            ));
        }
        Ok(trace)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `s`, the index of the last step.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn theta(&self) -> &BTreeMap<usize, u64> {
        &self.theta
    }

    pub fn delta(&self) -> &BTreeMap<Vec<usize>, Color> {
        &self.delta
    }

    fn step_indices(&self) -> core::ops::RangeInclusive<usize> {
        self.arity - 1..=self.steps
    }
}

/// Index sets touched at step `i`: `J ∪ {i}` with `J` a `(k-2)`-subset of
/// `{1, ..., i-1}`, in lexicographic order of `J`.
fn delta_keys(arity: usize, step: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..step).combinations(arity - 2).map(move |mut j| {
        j.push(step);
        j
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EncodeOutcome {
    /// `points` is `u_1, ..., u_{s+1}`, ending with `x`.
    Terminated {
        trace: EncodingTrace,
        points: Vec<Rational>,
    },
    /// The step cap ran out. `prefix` holds `u_k, ..., u_m` with `x` as the
    /// limit candidate.
    CapReached {
        prefix: MonotoneSequence,
        steps: usize,
    },
}

impl EncodeOutcome {
    pub fn trace(&self) -> Option<&EncodingTrace> {
        match self {
            EncodeOutcome::Terminated { trace, .. } => Some(trace),
            EncodeOutcome::CapReached { .. } => None,
        }
    }
}

/// Convergence rate for a cap-reached prefix: the term `u_{i+1}` lies in the
/// step-`i` ball, which contains `x`, so it is within `2^(1-i)` of `x`.
pub fn prefix_rate(arity: usize, len: usize) -> Vec<Rational> {
    (0..len)
        .map(|j| Rational::inverse_power_of_two(arity - 2 + j))
        .collect()
}

fn seeds<S: CountableSpace>(space: &S, arity: usize) -> Vec<Rational> {
    space.points_from(1).take(arity - 1).map(|(_, p)| p).collect()
}

/// Anchors for step `step` and index set `j`: `u_step` plus `u_j` for `j`.
fn anchors(points: &[Rational], key: &[usize]) -> Result<KSubset> {
    KSubset::new(key.iter().map(|&j| points[j - 1].clone()).collect())
}

fn ball_for<S: CountableSpace>(space: &S, center_rank: u64, step: usize) -> Result<Ball> {
    Ball::new(space.point(center_rank), Rational::inverse_power_of_two(step))
}

fn check_arity<C: Coloring + ?Sized>(chi: &C) -> Result<usize> {
    let k = chi.arity();
    if k < 2 {
        return Err(Error::Parameter(format!(
            "encoding needs arity at least 2, got {k}"
        )));
    }
    Ok(k)
}

/// Runs the encoder on `x` for at most `step_cap` steps.
pub fn encode<S, C>(space: &S, chi: &C, x: &Rational, step_cap: usize) -> Result<EncodeOutcome>
where
    S: CountableSpace,
    C: Coloring + ?Sized,
{
    let k = check_arity(chi)?;
    if step_cap == 0 {
        return Err(Error::Parameter("step cap must be at least 1".into()));
    }
    let mut points = seeds(space, k);
    if points.contains(x) {
        return Err(Error::SeedPoint(x.clone()));
    }
    let x_rank = space.rank(x);

    let mut region = Region::whole();
    let mut theta = BTreeMap::new();
    let mut delta = BTreeMap::new();

    for (done, step) in (k - 1..).enumerate() {
        let radius = Rational::inverse_power_of_two(step);
        let (center_rank, center) = space
            .points_from(1)
            .take(x_rank as usize)
            .find(|(_, p)| space.distance(x, p) < radius)
            .ok_or_else(|| Error::Internal(format!("no ball center found at step {step}")))?;
        theta.insert(step, center_rank);

        for key in delta_keys(k, step) {
            let anchors = anchors(&points, &key)?;
            let color = chi.color(&anchors.with(x)?)?;
            delta.insert(key, color);
            region.push(Atom::Neighborhood { color, anchors });
        }
        region.push(Atom::Ball(Ball::new(center, radius)?));

        if !region.contains(chi, x)? {
            return Err(Error::ChainBroken { step });
        }

        let last_rank = space.rank(&points[step - 1]);
        let next = region.min_element_from(chi, space, last_rank + 1, x_rank)?;
        let reached = &next == x;
        points.push(next);

        if reached {
            let trace = EncodingTrace::new(k, step, theta, delta)?;
            return Ok(EncodeOutcome::Terminated { trace, points });
        }
        if done + 1 == step_cap {
            let prefix = MonotoneSequence::new(points.split_off(k - 1), x.clone())?;
            return Ok(EncodeOutcome::CapReached {
                prefix,
                steps: step_cap,
            });
        }
    }
    unreachable!("step counter is unbounded")
}

/// Rebuilds `u_1, ..., u_{s+1}` from a trace without access to the point.
///
/// `cap` bounds the rank of every minimum searched for.
pub fn replay<S, C>(space: &S, chi: &C, trace: &EncodingTrace, cap: u64) -> Result<Vec<Rational>>
where
    S: CountableSpace,
    C: Coloring + ?Sized,
{
    let k = check_arity(chi)?;
    if trace.arity() != k {
        return Err(Error::MalformedTrace(format!(
            "trace arity {} does not match coloring arity {k}",
            trace.arity()
        )));
    }
    let mut points = seeds(space, k);
    let mut region = Region::whole();

    for step in trace.step_indices() {
        for key in delta_keys(k, step) {
            let color = trace.delta[&key];
            if color >= chi.num_colors() {
                return Err(Error::Inconsistent {
                    step,
                    reason: format!("recorded color {color} is not a color of this coloring"),
                });
            }
            region.push(Atom::Neighborhood {
                color,
                anchors: anchors(&points, &key)?,
            });
        }
        region.push(Atom::Ball(ball_for(space, trace.theta[&step], step)?));

        let last_rank = space.rank(&points[step - 1]);
        let next = region
            .min_element_from(chi, space, last_rank + 1, cap)
            .map_err(|e| match e {
                Error::SearchCap { cap } => Error::Inconsistent {
                    step,
                    reason: format!("region has no member ranked at most {cap}"),
                },
                other => other,
            })?;
        points.push(next);
    }
    Ok(points)
}

/// Recovers the encoded point: the minimum of the final region.
pub fn decode<S, C>(space: &S, chi: &C, trace: &EncodingTrace, cap: u64) -> Result<Rational>
where
    S: CountableSpace,
    C: Coloring + ?Sized,
{
    let mut points = replay(space, chi, trace, cap)?;
    Ok(points.pop().expect("replay yields at least the seeds"))
}

/// Rebuilds the regions `U_{k-1}, ..., U_{s+1}` of a trace, paired with
/// the point chosen as each region's minimum.
pub fn regions<S, C>(
    space: &S,
    chi: &C,
    trace: &EncodingTrace,
    cap: u64,
) -> Result<Vec<(Region, Rational)>>
where
    S: CountableSpace,
    C: Coloring + ?Sized,
{
    let points = replay(space, chi, trace, cap)?;
    let k = trace.arity();
    let mut region = Region::whole();
    let mut out = Vec::new();
    out.push((region.clone(), points[k - 2].clone()));
    for step in trace.step_indices() {
        for key in delta_keys(k, step) {
            region.push(Atom::Neighborhood {
                color: trace.delta[&key],
                anchors: anchors(&points, &key)?,
            });
        }
        region.push(Atom::Ball(ball_for(space, trace.theta[&step], step)?));
        out.push((region.clone(), points[step].clone()));
    }
    Ok(out)
}

//! Colorings of k-element subsets.
//!
//! Colors are 0-based, `0..num_colors`. The three counterexample colorings
//! already use `{0, 1}` so their labels need no translation.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::space::rank;
use crate::{Error, Rational, Result};

pub type Color = usize;

/// A set of distinct points, kept in ascending numeric order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KSubset {
    points: Vec<Rational>,
}

impl KSubset {
    /// Sorts `points`; rejects duplicates.
    pub fn new(mut points: Vec<Rational>) -> Result<Self> {
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0].clone()));
        }
        Ok(KSubset { points })
    }

    pub fn from_slice(points: &[Rational]) -> Result<Self> {
        Self::new(points.to_vec())
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Rational) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// This set with `p` added; fails if `p` is already present.
    pub fn with(&self, p: &Rational) -> Result<KSubset> {
        match self.points.binary_search(p) {
            Ok(_) => Err(Error::AnchorInSubset(p.clone())),
            Err(at) => {
                let mut points = self.points.clone();
                points.insert(at, p.clone());
                Ok(KSubset { points })
            }
        }
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('{')?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_char('}')
    }
}

impl fmt::Debug for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A total function from k-element subsets to `0..num_colors`.
///
/// Implementors provide [`color_sorted`](Self::color_sorted), which only
/// ever sees subsets of the right size; [`color`](Self::color) handles the
/// arity and range checks.
pub trait Coloring {
    fn arity(&self) -> usize;

    fn num_colors(&self) -> usize;

    /// `points` is ascending, distinct and has exactly `arity()` elements.
    fn color_sorted(&self, points: &[Rational]) -> Result<Color>;

    fn color(&self, s: &KSubset) -> Result<Color> {
        if s.len() != self.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                found: s.len(),
            });
        }
        let color = self.color_sorted(s.points())?;
        if color >= self.num_colors() {
            return Err(Error::ColorOutOfRange {
                color,
                colors: self.num_colors(),
            });
        }
        Ok(color)
    }

    /// Evaluates an unsorted presentation of a set.
    fn eval(&self, points: &[Rational]) -> Result<Color> {
        self.color(&KSubset::from_slice(points)?)
    }
}

impl<C: Coloring + ?Sized> Coloring for &C {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn num_colors(&self) -> usize {
        (**self).num_colors()
    }
    fn color_sorted(&self, points: &[Rational]) -> Result<Color> {
        (**self).color_sorted(points)
    }
}

impl<C: Coloring + ?Sized> Coloring for Box<C> {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn num_colors(&self) -> usize {
        (**self).num_colors()
    }
    fn color_sorted(&self, points: &[Rational]) -> Result<Color> {
        (**self).color_sorted(points)
    }
}

/// Triples `x1 < x2 < x3`: 0 if `|x1 - x2| <= |x2 - x3|`, else 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct DistanceTriple;

impl Coloring for DistanceTriple {
    fn arity(&self) -> usize {
        3
    }
    fn num_colors(&self) -> usize {
        2
    }
    fn color_sorted(&self, p: &[Rational]) -> Result<Color> {
        Ok(if p[0].distance(&p[1]) <= p[1].distance(&p[2]) {
            0
        } else {
            1
        })
    }
}

/// Pairs `x1 < x2`: 0 if `x2` precedes `x1` in the enumeration, else 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct SierpinskiPair;

impl Coloring for SierpinskiPair {
    fn arity(&self) -> usize {
        2
    }
    fn num_colors(&self) -> usize {
        2
    }
    fn color_sorted(&self, p: &[Rational]) -> Result<Color> {
        Ok(if rank(&p[1]) <= rank(&p[0]) { 0 } else { 1 })
    }
}

/// Triples `x1 < x2 < x3`: 0 if the middle point is enumerated after both
/// outer points, else 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct RankHatTriple;

impl Coloring for RankHatTriple {
    fn arity(&self) -> usize {
        3
    }
    fn num_colors(&self) -> usize {
        2
    }
    fn color_sorted(&self, p: &[Rational]) -> Result<Color> {
        let middle = rank(&p[1]);
        Ok(if rank(&p[0]) <= middle && rank(&p[2]) <= middle {
            0
        } else {
            1
        })
    }
}

pub fn eval_distance_triple(s: &KSubset) -> Result<Color> {
    DistanceTriple.color(s)
}

pub fn eval_sierpinski_pair(s: &KSubset) -> Result<Color> {
    SierpinskiPair.color(s)
}

pub fn eval_rank_hat_triple(s: &KSubset) -> Result<Color> {
    RankHatTriple.color(s)
}

/// Every subset gets color 0.
#[derive(Clone, Copy, Debug)]
pub struct Constant {
    arity: usize,
    colors: usize,
}

impl Constant {
    pub fn new(arity: usize, colors: usize) -> Result<Self> {
        check_shape(arity, colors)?;
        Ok(Constant { arity, colors })
    }
}

impl Coloring for Constant {
    fn arity(&self) -> usize {
        self.arity
    }
    fn num_colors(&self) -> usize {
        self.colors
    }
    fn color_sorted(&self, _: &[Rational]) -> Result<Color> {
        Ok(0)
    }
}

/// A pseudo-random coloring that is a pure function of the canonical text
/// of the subset and the seed.
#[derive(Clone, Copy, Debug)]
pub struct SeededRandom {
    arity: usize,
    colors: usize,
    seed: u64,
}

impl SeededRandom {
    pub fn new(arity: usize, colors: usize, seed: u64) -> Result<Self> {
        check_shape(arity, colors)?;
        Ok(SeededRandom {
            arity,
            colors,
            seed,
        })
    }
}

impl Coloring for SeededRandom {
    fn arity(&self) -> usize {
        self.arity
    }
    fn num_colors(&self) -> usize {
        self.colors
    }
    fn color_sorted(&self, points: &[Rational]) -> Result<Color> {
        let mut h = Fnv1a::default();
        for p in points {
            // writing into the hasher cannot fail
            let _ = write!(h, "{p},");
        }
        let mixed = splitmix64(h.0 ^ splitmix64(self.seed));
        Ok((mixed % self.colors as u64) as Color)
    }
}

struct Fnv1a(u64);

impl Default for Fnv1a {
    fn default() -> Self {
        Fnv1a(0xcbf2_9ce4_8422_2325)
    }
}

impl Write for Fnv1a {
    fn write_str(&mut self, s: &str) -> fmt::Result {
        for b in s.bytes() {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn check_shape(arity: usize, colors: usize) -> Result<()> {
    if arity < 2 {
        return Err(Error::Parameter(alloc::format!(
            "arity must be at least 2, got {arity}"
        )));
    }
    if colors < 1 {
        return Err(Error::Parameter("at least one color is required".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyntheticKind {
    Constant,
    SeededRandom,
}

pub fn make_synthetic(
    kind: SyntheticKind,
    arity: usize,
    colors: usize,
    seed: u64,
) -> Result<Box<dyn Coloring + Send + Sync>> {
    Ok(match kind {
        SyntheticKind::Constant => Box::new(Constant::new(arity, colors)?),
        SyntheticKind::SeededRandom => Box::new(SeededRandom::new(arity, colors, seed)?),
    })
}

/// The (k-1)-ary coloring `S ↦ inner(S ∪ {anchor})`.
#[derive(Clone, Debug)]
pub struct Collapsed<C> {
    inner: C,
    anchor: Rational,
}

pub fn collapse<C: Coloring>(inner: C, anchor: Rational) -> Result<Collapsed<C>> {
    if inner.arity() < 2 {
        return Err(Error::Parameter(
            "cannot collapse a coloring of arity below 2".into(),
        ));
    }
    Ok(Collapsed { inner, anchor })
}

impl<C> Collapsed<C> {
    pub fn anchor(&self) -> &Rational {
        &self.anchor
    }
}

impl<C: Coloring> Coloring for Collapsed<C> {
    fn arity(&self) -> usize {
        self.inner.arity() - 1
    }
    fn num_colors(&self) -> usize {
        self.inner.num_colors()
    }
    fn color_sorted(&self, points: &[Rational]) -> Result<Color> {
        let base = KSubset {
            points: points.to_vec(),
        };
        self.inner.color(&base.with(&self.anchor)?)
    }
}

/// A coloring backed by an explicit table over a finite domain.
#[derive(Clone, Debug)]
pub struct TableColoring {
    arity: usize,
    colors: usize,
    table: BTreeMap<KSubset, Color>,
}

impl TableColoring {
    pub fn new(arity: usize, colors: usize) -> Result<Self> {
        if arity < 1 || colors < 1 {
            return Err(Error::Parameter(
                "table colorings need arity and colors of at least 1".into(),
            ));
        }
        Ok(TableColoring {
            arity,
            colors,
            table: BTreeMap::new(),
        })
    }

    pub fn set(&mut self, subset: KSubset, color: Color) -> Result<()> {
        if subset.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                found: subset.len(),
            });
        }
        if color >= self.colors {
            return Err(Error::ColorOutOfRange {
                color,
                colors: self.colors,
            });
        }
        self.table.insert(subset, color);
        Ok(())
    }
}

impl Coloring for TableColoring {
    fn arity(&self) -> usize {
        self.arity
    }
    fn num_colors(&self) -> usize {
        self.colors
    }
    fn color_sorted(&self, points: &[Rational]) -> Result<Color> {
        let key = KSubset {
            points: points.to_vec(),
        };
        self.table
            .get(&key)
            .copied()
            .ok_or_else(|| Error::OutsideDomain(key.to_string()))
    }
}

/// Wraps a closure over ascending point slices.
pub struct FnColoring<F> {
    arity: usize,
    colors: usize,
    f: F,
}

impl<F: Fn(&[Rational]) -> Color> FnColoring<F> {
    pub fn new(arity: usize, colors: usize, f: F) -> Result<Self> {
        if arity < 1 || colors < 1 {
            return Err(Error::Parameter(
                "closure colorings need arity and colors of at least 1".into(),
            ));
        }
        Ok(FnColoring { arity, colors, f })
    }
}

impl<F: Fn(&[Rational]) -> Color> Coloring for FnColoring<F> {
    fn arity(&self) -> usize {
        self.arity
    }
    fn num_colors(&self) -> usize {
        self.colors
    }
    fn color_sorted(&self, points: &[Rational]) -> Result<Color> {
        Ok((self.f)(points))
    }
}

/// Named coloring selection, as used in experiment configs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringSpec {
    DistanceTriple,
    SierpinskiPair,
    RankHatTriple,
    Constant { arity: usize, colors: usize },
    SeededRandom { arity: usize, colors: usize, seed: u64 },
}

impl ColoringSpec {
    pub const NAMES: [&'static str; 5] = [
        "distance-triple",
        "sierpinski-pair",
        "rank-hat-triple",
        "constant",
        "seeded-random",
    ];

    /// `arity`, `colors` and `seed` are only consulted by the synthetic
    /// colorings.
    pub fn from_name(name: &str, arity: usize, colors: usize, seed: u64) -> Result<Self> {
        let spec = match name {
            "distance-triple" => ColoringSpec::DistanceTriple,
            "sierpinski-pair" => ColoringSpec::SierpinskiPair,
            "rank-hat-triple" => ColoringSpec::RankHatTriple,
            "constant" => ColoringSpec::Constant { arity, colors },
            "seeded-random" => ColoringSpec::SeededRandom {
                arity,
                colors,
                seed,
            },
            other => {
                return Err(Error::Parameter(alloc::format!(
                    "unknown coloring {other:?}"
                )))
            }
        };
        if let ColoringSpec::Constant { .. } | ColoringSpec::SeededRandom { .. } = spec {
            check_shape(arity, colors)?;
        }
        Ok(spec)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ColoringSpec::DistanceTriple => "distance-triple",
            ColoringSpec::SierpinskiPair => "sierpinski-pair",
            ColoringSpec::RankHatTriple => "rank-hat-triple",
            ColoringSpec::Constant { .. } => "constant",
            ColoringSpec::SeededRandom { .. } => "seeded-random",
        }
    }

    pub fn build(&self) -> Result<Box<dyn Coloring + Send + Sync>> {
        Ok(match *self {
            ColoringSpec::DistanceTriple => Box::new(DistanceTriple),
            ColoringSpec::SierpinskiPair => Box::new(SierpinskiPair),
            ColoringSpec::RankHatTriple => Box::new(RankHatTriple),
            ColoringSpec::Constant { arity, colors } => {
                make_synthetic(SyntheticKind::Constant, arity, colors, 0)?
            }
            ColoringSpec::SeededRandom {
                arity,
                colors,
                seed,
            } => make_synthetic(SyntheticKind::SeededRandom, arity, colors, seed)?,
        })
    }
}

/// Whether every `arity`-subset of `points` gets the same color; returns
/// that color, or `None` when two subsets disagree. Sets smaller than the
/// arity have no subsets and report `Some(None)`.
pub fn common_color<C: Coloring + ?Sized>(
    chi: &C,
    points: &[Rational],
) -> Result<Option<Option<Color>>> {
    use itertools::Itertools;
    let mut seen = None;
    for combo in points.iter().cloned().combinations(chi.arity()) {
        let c = chi.color(&KSubset::new(combo)?)?;
        match seen {
            None => seen = Some(c),
            Some(prev) if prev != c => return Ok(None),
            Some(_) => {}
        }
    }
    Ok(Some(seen))
}

pub(crate) fn describe(points: &[Rational]) -> String {
    let mut s = String::new();
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{p}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    fn set(points: &[Rational]) -> KSubset {
        KSubset::from_slice(points).unwrap()
    }

    #[test]
    fn ksubset_sorts_and_rejects_duplicates() {
        let s = KSubset::new(vec![r(3, 1), r(0, 1), r(1, 2)]).unwrap();
        assert_eq!(s.points(), &[r(0, 1), r(1, 2), r(3, 1)]);
        assert_eq!(
            KSubset::new(vec![r(1, 1), r(2, 2)]),
            Err(Error::DuplicatePoint(r(1, 1)))
        );
    }

    #[test]
    fn distance_triple_examples() {
        assert_eq!(eval_distance_triple(&set(&[r(0, 1), r(1, 1), r(3, 1)])), Ok(0));
        assert_eq!(eval_distance_triple(&set(&[r(0, 1), r(2, 1), r(3, 1)])), Ok(1));
        assert_eq!(eval_distance_triple(&set(&[r(0, 1), r(1, 1), r(2, 1)])), Ok(0));
        assert_eq!(
            eval_distance_triple(&set(&[r(0, 1), r(1, 1)])),
            Err(Error::Arity {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn sierpinski_pair_examples() {
        assert_eq!(eval_sierpinski_pair(&set(&[r(-1, 1), r(1, 1)])), Ok(1));
        assert_eq!(eval_sierpinski_pair(&set(&[r(-2, 1), r(1, 1)])), Ok(0));
        assert_eq!(eval_sierpinski_pair(&set(&[r(0, 1), r(1, 1)])), Ok(1));
        assert!(matches!(
            eval_sierpinski_pair(&set(&[r(0, 1), r(1, 1), r(2, 1)])),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn rank_hat_triple_examples() {
        assert_eq!(eval_rank_hat_triple(&set(&[r(-1, 1), r(0, 1), r(1, 1)])), Ok(1));
        assert_eq!(eval_rank_hat_triple(&set(&[r(-1, 1), r(1, 2), r(1, 1)])), Ok(0));
        assert_eq!(eval_rank_hat_triple(&set(&[r(0, 1), r(1, 1), r(2, 1)])), Ok(1));
        assert!(eval_rank_hat_triple(&set(&[r(0, 1)])).is_err());
    }

    #[test]
    fn collapse_examples() {
        let c = collapse(DistanceTriple, r(0, 1)).unwrap();
        assert_eq!(c.arity(), 2);
        assert_eq!(c.eval(&[r(1, 1), r(2, 1)]), Ok(0));
        assert_eq!(c.eval(&[r(2, 1), r(3, 1)]), Ok(1));
        assert_eq!(
            c.eval(&[r(0, 1), r(3, 1)]),
            Err(Error::AnchorInSubset(r(0, 1)))
        );
        let c = collapse(RankHatTriple, r(1, 2)).unwrap();
        assert_eq!(c.eval(&[r(-1, 1), r(1, 1)]), Ok(0));
        let points = collapse(SierpinskiPair, r(0, 1)).unwrap();
        assert_eq!(points.arity(), 1);
        assert_eq!(points.eval(&[r(1, 1)]), Ok(1));
    }

    #[test]
    fn synthetic_colorings() {
        let c = make_synthetic(SyntheticKind::Constant, 2, 2, 0).unwrap();
        assert_eq!(c.eval(&[r(0, 1), r(1, 1)]), Ok(0));
        let c = make_synthetic(SyntheticKind::SeededRandom, 2, 3, 99).unwrap();
        let a = c.eval(&[r(0, 1), r(1, 1)]).unwrap();
        assert_eq!(c.eval(&[r(0, 1), r(1, 1)]), Ok(a));
        assert_eq!(c.eval(&[r(1, 1), r(0, 1)]), Ok(a));
        assert!(a < 3);
        assert!(make_synthetic(SyntheticKind::Constant, 1, 2, 0).is_err());
        assert!(make_synthetic(SyntheticKind::SeededRandom, 2, 0, 0).is_err());
    }

    #[test]
    fn seeded_random_uses_every_color() {
        let c = SeededRandom::new(2, 3, 7).unwrap();
        let mut seen = [false; 3];
        for n in 1..40 {
            seen[c.eval(&[r(0, 1), r(n, 1)]).unwrap()] = true;
        }
        assert_eq!(seen, [true; 3]);
    }

    #[test]
    fn table_coloring_domain() {
        let mut t = TableColoring::new(2, 2).unwrap();
        t.set(set(&[r(0, 1), r(1, 1)]), 1).unwrap();
        assert_eq!(t.eval(&[r(1, 1), r(0, 1)]), Ok(1));
        assert!(matches!(
            t.eval(&[r(0, 1), r(2, 1)]),
            Err(Error::OutsideDomain(_))
        ));
        assert!(t.set(set(&[r(0, 1), r(2, 1)]), 2).is_err());
    }

    #[test]
    fn out_of_range_colors_are_caught() {
        let bad = FnColoring::new(2, 2, |_: &[Rational]| 5).unwrap();
        assert_eq!(
            bad.eval(&[r(0, 1), r(1, 1)]),
            Err(Error::ColorOutOfRange {
                color: 5,
                colors: 2
            })
        );
    }

    #[test]
    fn spec_names_round_trip() {
        for name in ColoringSpec::NAMES {
            let spec = ColoringSpec::from_name(name, 2, 2, 1).unwrap();
            assert_eq!(spec.name(), name);
            spec.build().unwrap();
        }
        assert!(ColoringSpec::from_name("nope", 2, 2, 0).is_err());
        assert!(ColoringSpec::from_name("constant", 1, 2, 0).is_err());
    }

    #[test]
    fn common_color_detects_mixed_sets() {
        let pts = [r(0, 1), r(1, 1), r(2, 1)];
        assert_eq!(common_color(&Constant::new(2, 2).unwrap(), &pts), Ok(Some(Some(0))));
        // {0,1} -> 1, {-2,1} -> 0
        assert_eq!(
            common_color(&SierpinskiPair, &[r(-2, 1), r(0, 1), r(1, 1)]),
            Ok(None)
        );
        assert_eq!(common_color(&DistanceTriple, &pts[..2]), Ok(Some(None)));
    }
}

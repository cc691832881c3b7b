//! Enumerated metric spaces.
//!
//! The canonical enumeration of ℚ orders reduced fractions `p/q` by height
//! `|p| + q`, then by denominator, then negative before positive, with `0`
//! first:
//!
//! ```text
//! rank:  1   2   3   4   5    6     7    8   9   10    11  ...
//! point: 0  -1   1  -2   2  -1/2   1/2  -3   3  -1/3  1/3  ...
//! ```
//!
//! The enumeration index is both the well-order (smaller rank means "more
//! minimal") and the dense sequence of ball centers.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::{Error, Rational, Result};

/// A countable metric space whose points are rationals, listed by a
/// bijection with the positive integers.
pub trait CountableSpace {
    /// The `n`-th point, `n >= 1`.
    fn point(&self, n: u64) -> Rational;

    /// Inverse of [`point`](Self::point).
    fn rank(&self, p: &Rational) -> u64;

    /// The point after `current`, which must be `self.point(n)`.
    ///
    /// Override when stepping is cheaper than indexing.
    fn successor(&self, n: u64, current: &Rational) -> Rational {
        let _ = current;
        self.point(n + 1)
    }

    fn distance(&self, a: &Rational, b: &Rational) -> Rational {
        a.distance(b)
    }

    /// Iterates `(n, point(n))` for `n = start, start + 1, ...`.
    fn points_from(&self, start: u64) -> Points<'_, Self>
    where
        Self: Sized,
    {
        Points {
            space: self,
            next: start.max(1),
            current: None,
        }
    }
}

pub struct Points<'a, S> {
    space: &'a S,
    next: u64,
    current: Option<Rational>,
}

impl<S: CountableSpace> Iterator for Points<'_, S> {
    type Item = (u64, Rational);

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.next;
        let p = match self.current.take() {
            Some(prev) => self.space.successor(n - 1, &prev),
            None => self.space.point(n),
        };
        self.current = Some(p.clone());
        self.next += 1;
        Some((n, p))
    }
}

/// ℚ with the absolute-value metric and the canonical enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl CountableSpace for Rationals {
    fn point(&self, n: u64) -> Rational {
        enumerate(n)
    }

    fn rank(&self, p: &Rational) -> u64 {
        rank(p)
    }

    fn successor(&self, _n: u64, current: &Rational) -> Rational {
        successor(current)
    }
}

/// The `n`-th rational in canonical order. Panics if `n == 0`.
pub fn enumerate(n: u64) -> Rational {
    assert!(n >= 1, "enumeration starts at 1");
    if n == 1 {
        return Rational::zero();
    }
    let mut offset = n - 1;
    let mut height = 2u64;
    loop {
        let block = 2 * totient(height);
        if offset <= block {
            // offset is 1-based inside this height's block
            let slot = (offset - 1) / 2;
            let negative = (offset - 1).is_multiple_of(2);
            let denom = (1..height)
                .filter(|q| q.gcd(&height) == 1)
                .nth(slot as usize)
                .expect("slot within totient count");
            let numer = (height - denom) as i64;
            let numer = if negative { -numer } else { numer };
            return Rational::ratio(numer, denom as i64);
        }
        offset -= block;
        height += 1;
    }
}

/// Position of `p` in the canonical order.
///
/// Panics if `|numer| + denom` does not fit in a `u64`.
pub fn rank(p: &Rational) -> u64 {
    if p.is_zero() {
        return 1;
    }
    let (height, denom) = height_and_denom(p);
    let before: u64 = 1 + (2..height).map(|h| 2 * totient(h)).sum::<u64>();
    let smaller_denoms = (1..denom).filter(|q| q.gcd(&height) == 1).count() as u64;
    before + 2 * smaller_denoms + if p.is_negative() { 1 } else { 2 }
}

fn height_and_denom(p: &Rational) -> (u64, u64) {
    let numer = p.numer().abs().to_u64();
    let denom = p.denom().to_u64();
    match (numer, denom) {
        (Some(a), Some(b)) => (a.checked_add(b).expect("height overflows u64"), b),
        _ => panic!("rational {p} too large to rank"),
    }
}

fn successor(p: &Rational) -> Rational {
    if p.is_zero() {
        return Rational::integer(-1);
    }
    if p.is_negative() {
        return -p;
    }
    let (height, denom) = height_and_denom(p);
    match (denom + 1..height).find(|q| q.gcd(&height) == 1) {
        Some(q) => Rational::ratio(-((height - q) as i64), q as i64),
        None => Rational::integer(-(height as i64)),
    }
}

/// Euler's totient by trial division.
fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            while n.is_multiple_of(f) {
                n /= f;
            }
            result -= result / f;
        }
        f += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// An open ball `{p : |center - p| < radius}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    center: Rational,
    radius: Rational,
}

impl Ball {
    pub fn new(center: Rational, radius: Rational) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::NonPositiveRadius(radius));
        }
        Ok(Ball { center, radius })
    }

    pub fn center(&self) -> &Rational {
        &self.center
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    /// Strict: boundary points are outside.
    pub fn contains(&self, p: &Rational) -> bool {
        self.center.distance(p) < self.radius
    }
}

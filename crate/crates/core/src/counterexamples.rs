//! Constructive verifiers for the colorings on ℚ and ℝ that rule out
//! stronger statements.

use alloc::format;
use alloc::vec::Vec;

use itertools::Itertools;

use crate::coloring::{eval_distance_triple, eval_rank_hat_triple, eval_sierpinski_pair, Color, KSubset};
use crate::space::rank;
use crate::{ClusterSide, Error, Rational, Result, Verdict};

/// `r1 < r2 < r3` with `r2` enumerated after both `r1` and `r3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialTriple {
    r1: Rational,
    r2: Rational,
    r3: Rational,
}

impl SpecialTriple {
    pub fn new(r1: Rational, r2: Rational, r3: Rational) -> Result<Self> {
        if !(r1 < r2 && r2 < r3) {
            return Err(Error::Precondition(format!(
                "({r1}, {r2}, {r3}) is not strictly ascending"
            )));
        }
        let middle = rank(&r2);
        if rank(&r1) > middle || rank(&r3) > middle {
            return Err(Error::Precondition(format!(
                "({r1}, {r2}, {r3}): the middle point must be ranked after both ends"
            )));
        }
        Ok(SpecialTriple { r1, r2, r3 })
    }

    pub fn points(&self) -> [&Rational; 3] {
        [&self.r1, &self.r2, &self.r3]
    }
}

/// Builds a special triple around `hub` the way one is built near a limit
/// point.
///
/// On one side of the hub, `r1` is the farthest point such that it and every
/// point between it and the hub are ranked after the hub; `r2` is the
/// farthest point between `r1` and the hub such that it and everything
/// nearer the hub are ranked after `r1`. Below the hub this gives
/// `r1 < r2 < hub`; above it the ends are swapped. The side with more points
/// is tried first (below on a tie), then the other; `r1` falls back to
/// nearer candidates when the farthest admits no `r2`.
pub fn find_special_triple(points: &[Rational], hub: &Rational) -> Result<Option<SpecialTriple>> {
    if !points.contains(hub) {
        return Err(Error::NotAMember(hub.clone()));
    }
    let mut below: Vec<&Rational> = points.iter().filter(|p| *p < hub).collect();
    let mut above: Vec<&Rational> = points.iter().filter(|p| *p > hub).collect();
    // nearest the hub first
    below.sort_by(|a, b| b.cmp(a));
    below.dedup();
    above.sort();
    above.dedup();

    let sides = if above.len() > below.len() {
        [(above, true), (below, false)]
    } else {
        [(below, false), (above, true)]
    };
    let hub_rank = rank(hub);
    for (side, is_above) in sides {
        if let Some((r1, r2)) = pick_on_side(&side, hub_rank) {
            let triple = if is_above {
                SpecialTriple::new(hub.clone(), r2.clone(), r1.clone())?
            } else {
                SpecialTriple::new(r1.clone(), r2.clone(), hub.clone())?
            };
            return Ok(Some(triple));
        }
    }
    Ok(None)
}

/// `side` is ordered from the hub outward.
fn pick_on_side<'a>(side: &[&'a Rational], hub_rank: u64) -> Option<(&'a Rational, &'a Rational)> {
    let ranks: Vec<u64> = side.iter().map(|p| rank(p)).collect();
    // longest run from the hub outward ranked after the hub
    let window = ranks.iter().take_while(|&&n| n > hub_rank).count();
    (1..window).rev().find_map(|far| {
        let r1_rank = ranks[far];
        let inner = ranks[..far].iter().take_while(|&&n| n > r1_rank).count();
        // the inner run is counted from the hub, so its outermost point is
        // the one nearest r1
        (inner > 0).then(|| (side[far], side[inner - 1]))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialTripleColors {
    /// `(χ({r1, r2}), χ({r2, r3}))` under the pair coloring.
    pub pair_colors: (Color, Color),
    /// `χ({r1, r2, r3})` under the rank-hat coloring.
    pub hat_color: Color,
}

/// Computes the colors a special triple must receive and checks them:
/// pair colors `(1, 0)` and hat color `0`.
pub fn verify_special_triple_colors(t: &SpecialTriple) -> Result<SpecialTripleColors> {
    let t = SpecialTriple::new(t.r1.clone(), t.r2.clone(), t.r3.clone())?;
    let pair = |a: &Rational, b: &Rational| eval_sierpinski_pair(&KSubset::new(alloc::vec![a.clone(), b.clone()])?);
    let c12 = pair(&t.r1, &t.r2)?;
    let c23 = pair(&t.r2, &t.r3)?;
    let hat_color = eval_rank_hat_triple(&KSubset::new(alloc::vec![
        t.r1.clone(),
        t.r2.clone(),
        t.r3.clone()
    ])?)?;
    if (c12, c23, hat_color) != (1, 0, 0) {
        return Err(Error::Internal(format!(
            "special triple ({}, {}, {}) colored ({c12}, {c23}) / {hat_color}",
            t.r1, t.r2, t.r3
        )));
    }
    Ok(SpecialTripleColors {
        pair_colors: (c12, c23),
        hat_color,
    })
}

/// Two would-be limit points `l1 < l2` at distance `h`, with members
/// strictly within `h/5` of each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSpec {
    l1: Rational,
    l2: Rational,
    near_l1: Vec<Rational>,
    near_l2: Vec<Rational>,
}

impl ClusterSpec {
    pub fn new(l1: Rational, l2: Rational, near_l1: Vec<Rational>, near_l2: Vec<Rational>) -> Result<Self> {
        if l1 >= l2 {
            return Err(Error::Precondition(format!("need l1 < l2, got {l1} and {l2}")));
        }
        let spec = ClusterSpec {
            l1,
            l2,
            near_l1: sorted_unique(near_l1),
            near_l2: sorted_unique(near_l2),
        };
        let bound = spec.radius();
        for (center, members) in [(&spec.l1, &spec.near_l1), (&spec.l2, &spec.near_l2)] {
            if let Some(p) = members.iter().find(|p| p.distance(center) >= bound) {
                return Err(Error::Precondition(format!(
                    "{p} is not within {bound} of {center}"
                )));
            }
        }
        Ok(spec)
    }

    pub fn l1(&self) -> &Rational {
        &self.l1
    }

    pub fn l2(&self) -> &Rational {
        &self.l2
    }

    pub fn h(&self) -> Rational {
        &self.l2 - &self.l1
    }

    /// `h/5`.
    pub fn radius(&self) -> Rational {
        self.h().div(&Rational::integer(5)).expect("nonzero divisor")
    }

    pub fn near_l1(&self) -> &[Rational] {
        &self.near_l1
    }

    pub fn near_l2(&self) -> &[Rational] {
        &self.near_l2
    }
}

fn sorted_unique(mut v: Vec<Rational>) -> Vec<Rational> {
    v.sort();
    v.dedup();
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoLimitRefutation {
    /// One point near `l1`, two near `l2`; colored 1.
    pub one_triple: [Rational; 3],
    /// Two points near `l1`, one near `l2`; colored 0.
    pub zero_triple: [Rational; 3],
}

/// Shows a set with two limit points cannot be monochromatic under the
/// distance coloring by exhibiting a triple of each color.
///
/// The color-1 triple is the lowest member near `l1` with the two highest
/// near `l2`; the color-0 triple is the two lowest near `l1` with the highest
/// near `l2`. Both colors and the distance chain
/// `|r1 - r2| > 3h/5 >= 2h/5 >= |r2 - r3|` are checked exactly.
pub fn refute_two_limits(spec: &ClusterSpec) -> Result<TwoLimitRefutation> {
    let (low, high) = (&spec.near_l1, &spec.near_l2);
    if high.len() < 2 {
        return Err(Error::Insufficient {
            side: ClusterSide::Upper,
            needed: 2,
            found: high.len(),
        });
    }
    if low.len() < 2 {
        return Err(Error::Insufficient {
            side: ClusterSide::Lower,
            needed: 2,
            found: low.len(),
        });
    }
    let one_triple = [low[0].clone(), high[high.len() - 2].clone(), high[high.len() - 1].clone()];
    let zero_triple = [low[0].clone(), low[1].clone(), high[high.len() - 1].clone()];

    let fifth = spec.radius();
    let three_fifths = fifth.mul(&Rational::integer(3));
    let two_fifths = fifth.mul(&Rational::integer(2));
    let [a, b, c] = &one_triple;
    if !(a.distance(b) > three_fifths && b.distance(c) <= two_fifths) {
        return Err(Error::Internal(format!(
            "distance chain fails for ({a}, {b}, {c}) with h = {}",
            spec.h()
        )));
    }
    let color = |t: &[Rational; 3]| eval_distance_triple(&KSubset::from_slice(t)?);
    if color(&one_triple)? != 1 || color(&zero_triple)? != 0 {
        return Err(Error::Internal("cluster triples did not split colors".into()));
    }
    Ok(TwoLimitRefutation {
        one_triple,
        zero_triple,
    })
}

/// Exhaustively checks that no 4-subset has all four triples colored 0
/// under the rank-hat coloring. Any failure is an implementation bug.
pub fn check_no_all_zero_quad(points: &[Rational]) -> Result<Verdict<[Rational; 4]>> {
    let pool = sorted_unique(points.to_vec());
    if pool.len() < 4 {
        return Err(Error::Parameter(format!(
            "need at least 4 points, got {}",
            pool.len()
        )));
    }
    for quad in pool.iter().combinations(4) {
        let mut all_zero = true;
        for triple in quad.iter().combinations(3) {
            let t = KSubset::new(triple.into_iter().map(|p| (*p).clone()).collect())?;
            if eval_rank_hat_triple(&t)? != 0 {
                all_zero = false;
                break;
            }
        }
        if all_zero {
            return Ok(Verdict::Fail([
                quad[0].clone(),
                quad[1].clone(),
                quad[2].clone(),
                quad[3].clone(),
            ]));
        }
    }
    Ok(Verdict::Pass)
}

/// Whether `set` contains a special triple with one of its members as the
/// hub, searched the same way as [`find_special_triple`].
pub fn contains_special_triple(set: &[Rational]) -> Result<Option<SpecialTriple>> {
    for hub in set {
        if let Some(t) = find_special_triple(set, hub)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

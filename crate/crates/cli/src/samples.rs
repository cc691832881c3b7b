//! Seeded instance generators shared by `verify-claims` and the tests.

use rand::seq::SliceRandom;
use rand::Rng;
use ramsey_closure_core::counterexamples::ClusterSpec;
use ramsey_closure_core::space::enumerate;
use ramsey_closure_core::Rational;

const PRIMES: [i64; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HubSet {
    pub hub: Rational,
    /// Hub and side points, in shuffled presentation order.
    pub points: Vec<Rational>,
}

/// A hub `a/b` among the first 60 rationals plus 4 to 7 points `hub ± 1/q`
/// on one side, `q` distinct primes above `b`.
///
/// Each `hub ± 1/q` is already in lowest terms and its height grows with
/// `q`, so the nearer a point is to the hub the later it is enumerated, and
/// all of them come after the hub.
pub fn hub_set<R: Rng>(rng: &mut R) -> HubSet {
    let hub = enumerate(rng.gen_range(1..=60));
    let b: i64 = hub.denom().try_into().expect("small denominator");
    let count = rng.gen_range(4..=7);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let eligible: Vec<i64> = PRIMES.iter().copied().filter(|&q| q > b).collect();
    let mut points: Vec<Rational> = eligible
        .choose_multiple(rng, count)
        .map(|&q| &hub + &Rational::ratio(sign, q))
        .collect();
    points.push(hub.clone());
    points.shuffle(rng);
    HubSet { hub, points }
}

pub const CLUSTER_GAPS: [(i64, i64); 3] = [(1, 1), (1, 3), (7, 2)];

/// Two limits `h` apart, with 2 to 5 members near each at offsets strictly
/// inside `h/5`. `h` cycles through [`CLUSTER_GAPS`] by `index`.
pub fn cluster_spec<R: Rng>(rng: &mut R, index: usize) -> ClusterSpec {
    let (hp, hq) = CLUSTER_GAPS[index % CLUSTER_GAPS.len()];
    let h = Rational::ratio(hp, hq);
    let l1 = Rational::ratio(rng.gen_range(-20..=20), rng.gen_range(1..=6));
    let l2 = &l1 + &h;
    let fifth = h.div(&Rational::integer(5)).expect("nonzero");
    let mut near = |center: &Rational| -> Vec<Rational> {
        let count = rng.gen_range(2..=5);
        let mut offsets: Vec<i64> = (-99..=99).collect();
        offsets.shuffle(rng);
        offsets[..count]
            .iter()
            .map(|&o| center + &fifth.mul(&Rational::ratio(o, 100)))
            .collect()
    };
    let near_l1 = near(&l1);
    let near_l2 = near(&l2);
    ClusterSpec::new(l1, l2, near_l1, near_l2).expect("members lie inside h/5")
}

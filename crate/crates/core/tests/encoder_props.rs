use std::collections::BTreeSet;

use proptest::prelude::*;
use ramsey_closure_core::coloring::{
    Coloring, Constant, DistanceTriple, RankHatTriple, SeededRandom, SierpinskiPair,
};
use ramsey_closure_core::encoder::{
    decode, encode, prefix_rate, regions, EncodeOutcome, DEFAULT_DECODE_CAP, DEFAULT_STEP_CAP,
};
use ramsey_closure_core::ramsey::{validate_limit, validate_monotone};
use ramsey_closure_core::space::{enumerate, rank, CountableSpace, Rationals};
use ramsey_closure_core::{Error, Rational};

fn terminated(out: EncodeOutcome) -> (ramsey_closure_core::encoder::EncodingTrace, Vec<Rational>) {
    match out {
        EncodeOutcome::Terminated { trace, points } => (trace, points),
        EncodeOutcome::CapReached { steps, .. } => panic!("cap reached after {steps} steps"),
    }
}

/// Encodes ranks `k..k+count`, checking roundtrip, and returns the traces.
fn sweep<C: Coloring>(chi: &C, count: u64) -> Vec<ramsey_closure_core::encoder::EncodingTrace> {
    let k = chi.arity() as u64;
    (k..k + count)
        .map(|n| {
            let x = enumerate(n);
            let (trace, points) = terminated(encode(&Rationals, chi, &x, DEFAULT_STEP_CAP).unwrap());
            assert_eq!(points.last(), Some(&x));
            assert_eq!(decode(&Rationals, chi, &trace, DEFAULT_DECODE_CAP).unwrap(), x);
            trace
        })
        .collect()
}

#[test]
fn sierpinski_terminates_and_roundtrips() {
    let traces = sweep(&SierpinskiPair, 120);
    let distinct: BTreeSet<_> = traces.iter().collect();
    assert_eq!(distinct.len(), traces.len());
}

#[test]
fn rank_hat_terminates_and_roundtrips() {
    let traces = sweep(&RankHatTriple, 80);
    let distinct: BTreeSet<_> = traces.iter().collect();
    assert_eq!(distinct.len(), traces.len());
}

#[test]
fn synthetic_colorings_roundtrip() {
    sweep(&Constant::new(3, 2).unwrap(), 40);
    sweep(&SeededRandom::new(2, 3, 11).unwrap(), 60);
    sweep(&SeededRandom::new(3, 2, 5).unwrap(), 40);
    sweep(&DistanceTriple, 40);
}

#[test]
fn steps_never_exceed_rank() {
    for n in 2..150 {
        let x = enumerate(n);
        let (trace, _) = terminated(encode(&Rationals, &SierpinskiPair, &x, DEFAULT_STEP_CAP).unwrap());
        assert!(trace.steps() as u64 <= n, "rank {n} took {} steps", trace.steps());
    }
}

/// The encoded point lies in every region, each region refines the previous
/// one on probe points, and every chosen minimum is ranked no later than the
/// point, reaching it only at the end.
#[test]
fn chain_refinement_and_rank_monotonicity() {
    let probes: Vec<Rational> = (1..=400).map(enumerate).collect();
    for (chi, n) in [(&SierpinskiPair as &dyn Coloring, 77u64), (&RankHatTriple, 150), (&DistanceTriple, 61)] {
        let x = enumerate(n);
        let (trace, points) = terminated(encode(&Rationals, chi, &x, DEFAULT_STEP_CAP).unwrap());
        let chain = regions(&Rationals, chi, &trace, DEFAULT_DECODE_CAP).unwrap();
        assert_eq!(chain.len(), trace.steps() + 3 - chi.arity());
        for (region, _) in &chain {
            assert!(region.contains(chi, &x).unwrap());
        }
        for pair in chain.windows(2) {
            for p in &probes {
                if pair[1].0.contains(chi, p).unwrap() {
                    assert!(pair[0].0.contains(chi, p).unwrap());
                }
            }
        }
        let k = chi.arity();
        for (i, u) in points.iter().enumerate().skip(k - 1) {
            let last = i == points.len() - 1;
            assert!(rank(u) <= n);
            assert_eq!(rank(u) == n, last);
            assert_eq!(u, &chain[i + 2 - k].1);
            assert_eq!(&chain[i + 2 - k].0.min_element(chi, &Rationals, n).unwrap(), u);
        }
    }
}

#[test]
fn cap_reached_prefix_is_monotone_and_converges() {
    for chi in [&SierpinskiPair as &dyn Coloring, &RankHatTriple, &DistanceTriple] {
        // first point whose encoding takes at least three steps
        let (x, performed) = (chi.arity() as u64..)
            .map(enumerate)
            .find_map(|x| {
                let (full, _) = terminated(encode(&Rationals, chi, &x, DEFAULT_STEP_CAP).unwrap());
                let performed = full.steps() + 2 - chi.arity();
                (performed >= 3).then_some((x, performed))
            })
            .unwrap();
        let cap = performed - 1;
        let out = encode(&Rationals, chi, &x, cap).unwrap();
        let EncodeOutcome::CapReached { prefix, steps } = out else {
            panic!("expected the cap to bite");
        };
        assert_eq!(steps, cap);
        assert_eq!(prefix.len(), cap);
        assert_eq!(prefix.limit(), &x);
        assert!(validate_monotone(&prefix, chi).unwrap().is_pass());
        let rate = prefix_rate(chi.arity(), prefix.len());
        assert!(validate_limit(&prefix, &rate).unwrap().is_pass());
    }
}

#[test]
fn decode_rejects_trace_from_other_coloring() {
    let x = enumerate(40);
    let (trace, _) = terminated(encode(&Rationals, &SierpinskiPair, &x, DEFAULT_STEP_CAP).unwrap());
    let other = SeededRandom::new(2, 2, 3).unwrap();
    match decode(&Rationals, &other, &trace, 5_000) {
        Ok(y) => {
            // a foreign coloring may still replay; it just cannot land on x
            // unless it agrees with the original on every query
            let (again, _) = terminated(encode(&Rationals, &other, &y, DEFAULT_STEP_CAP).unwrap());
            assert_eq!(decode(&Rationals, &other, &again, DEFAULT_DECODE_CAP).unwrap(), y);
        }
        Err(e) => assert!(matches!(e, Error::Inconsistent { .. })),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn seeded_roundtrip(n in 3u64..400, seed in any::<u64>(), arity in 2usize..=3, colors in 1usize..=3) {
        let chi = SeededRandom::new(arity, colors, seed).unwrap();
        let x = enumerate(n);
        let out = encode(&Rationals, &chi, &x, DEFAULT_STEP_CAP).unwrap();
        let trace = out.trace().expect("terminates on the rationals");
        prop_assert_eq!(decode(&Rationals, &chi, trace, DEFAULT_DECODE_CAP).unwrap(), x);
    }

    #[test]
    fn theta_is_least_center(n in 2u64..300) {
        let x = enumerate(n);
        let (trace, _) = terminated(encode(&Rationals, &SierpinskiPair, &x, DEFAULT_STEP_CAP).unwrap());
        for (&step, &center) in trace.theta() {
            let radius = Rational::inverse_power_of_two(step);
            prop_assert!(Rationals.point(center).distance(&x) < radius);
            for m in 1..center {
                prop_assert!(Rationals.point(m).distance(&x) >= radius);
            }
        }
    }
}

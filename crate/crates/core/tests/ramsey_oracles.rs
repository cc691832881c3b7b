//! Search results checked against brute-force enumeration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ramsey_closure_core::coloring::{
    collapse, Color, Coloring, Constant, KSubset, RankHatTriple, SeededRandom,
    SierpinskiPair, TableColoring,
};
use ramsey_closure_core::counterexamples::contains_special_triple;
use ramsey_closure_core::ramsey::{
    classical, erdos_rado_extract, find_limit_monochromatic, find_monochromatic,
    validate_monotone, MonotoneSequence,
};
use ramsey_closure_core::space::enumerate;
use ramsey_closure_core::Rational;

/// Rank by walking the enumeration, independent of the closed-form rank.
fn scan_rank(p: &Rational) -> u64 {
    (1..).find(|&n| &enumerate(n) == p).unwrap()
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, size, i + 1, cur, out);
            cur.pop();
        }
    }
    go(n, size, 0, &mut cur, &mut out);
    out
}

fn brute_monochromatic(points: &[Rational], chi: &dyn Coloring) -> bool {
    let k = chi.arity();
    let colors: Vec<Color> = subsets(points.len(), k)
        .into_iter()
        .map(|idx| chi.eval(&idx.iter().map(|&i| points[i].clone()).collect::<Vec<_>>()).unwrap())
        .collect();
    colors.windows(2).all(|w| w[0] == w[1])
}

/// Lexicographically first monochromatic m-subset of the rank-sorted points.
fn brute_find(points: &[Rational], chi: &dyn Coloring, m: usize) -> Option<Vec<Rational>> {
    let mut sorted = points.to_vec();
    sorted.sort_by_key(scan_rank);
    subsets(sorted.len(), m)
        .into_iter()
        .map(|idx| idx.iter().map(|&i| sorted[i].clone()).collect::<Vec<_>>())
        .find(|cand| brute_monochromatic(cand, chi))
}

fn random_table(rng: &mut ChaCha8Rng, points: &[Rational], k: usize, c: usize) -> TableColoring {
    let mut table = TableColoring::new(k, c).unwrap();
    for idx in subsets(points.len(), k) {
        let s = KSubset::new(idx.iter().map(|&i| points[i].clone()).collect()).unwrap();
        table.set(s, rng.gen_range(0..c)).unwrap();
    }
    table
}

fn random_points(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    let mut ranks: Vec<u64> = Vec::new();
    while ranks.len() < len {
        let n = rng.gen_range(1..=80);
        if !ranks.contains(&n) {
            ranks.push(n);
        }
    }
    ranks.into_iter().map(enumerate).collect()
}

#[test]
fn find_monochromatic_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut found = 0;
    for _ in 0..120 {
        let k = rng.gen_range(2..=3);
        let c = rng.gen_range(2..=3);
        let len = rng.gen_range(k..=if k == 2 { 12 } else { 9 });
        let points = random_points(&mut rng, len);
        let chi = random_table(&mut rng, &points, k, c);
        let m = rng.gen_range(k..=len.min(k + 3));
        let got = find_monochromatic(&points, &chi, m).unwrap();
        assert_eq!(got, brute_find(&points, &chi, m), "k={k} c={c} m={m} points={points:?}");
        found += got.is_some() as usize;
    }
    assert!(found > 10, "instances should not all be empty");
}

#[test]
fn sierpinski_first_six_triple() {
    let six: Vec<_> = (1..=6).map(enumerate).collect();
    let got = find_monochromatic(&six, &SierpinskiPair, 3).unwrap().unwrap();
    assert!(brute_monochromatic(&got, &SierpinskiPair));
    assert_eq!(Some(got), brute_find(&six, &SierpinskiPair, 3));
}

#[test]
fn rank_hat_never_has_a_zero_quad() {
    let mut sorted: Vec<_> = (1..=14).map(enumerate).collect();
    sorted.sort_by_key(scan_rank);
    for idx in subsets(sorted.len(), 4) {
        let quad: Vec<_> = idx.iter().map(|&i| sorted[i].clone()).collect();
        let zeros = subsets(4, 3)
            .into_iter()
            .filter(|t| RankHatTriple.eval(&t.iter().map(|&i| quad[i].clone()).collect::<Vec<_>>()).unwrap() == 0)
            .count();
        assert!(zeros < 4, "all-zero quad {quad:?}");
    }
}

/// A subset S of terms is monochromatic under the collapse iff all k-subsets
/// of S ∪ {u_ω} that contain u_ω share a color.
#[test]
fn collapse_search_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let k = rng.gen_range(2..=3);
        let points = random_points(&mut rng, 10);
        let (limit, terms) = points.split_last().unwrap();
        let chi = SeededRandom::new(k, 2, rng.gen()).unwrap();
        let collapsed = collapse(&chi, limit.clone()).unwrap();
        for size in k - 1..=4 {
            for idx in subsets(terms.len(), size) {
                let s: Vec<_> = idx.iter().map(|&i| terms[i].clone()).collect();
                let via_collapse = brute_monochromatic(&s, &collapsed);
                let through_limit: Vec<Color> = subsets(s.len(), k - 1)
                    .into_iter()
                    .map(|sub| {
                        let mut pts: Vec<_> = sub.iter().map(|&i| s[i].clone()).collect();
                        pts.push(limit.clone());
                        chi.eval(&pts).unwrap()
                    })
                    .collect();
                assert_eq!(via_collapse, through_limit.windows(2).all(|w| w[0] == w[1]));
            }
        }
    }
}

/// Builds a coloring whose sets containing the limit are colored first and
/// whose remaining sets inherit from the limit via their last term.
fn inherited_coloring(seq: &MonotoneSequence, k: usize, c: usize, rng: &mut ChaCha8Rng) -> TableColoring {
    let mut table = TableColoring::new(k, c).unwrap();
    let terms = seq.terms();
    let mut limit_color = std::collections::HashMap::new();
    for idx in subsets(terms.len(), k - 1) {
        let color = rng.gen_range(0..c);
        let mut pts: Vec<_> = idx.iter().map(|&i| terms[i].clone()).collect();
        limit_color.insert(idx.clone(), color);
        pts.push(seq.limit().clone());
        table.set(KSubset::new(pts).unwrap(), color).unwrap();
    }
    for idx in subsets(terms.len(), k) {
        let (last, first) = idx.split_last().unwrap();
        let _ = last;
        let color = limit_color[&first.to_vec()];
        let pts: Vec<_> = idx.iter().map(|&i| terms[i].clone()).collect();
        table.set(KSubset::new(pts).unwrap(), color).unwrap();
    }
    table
}

#[test]
fn extraction_is_sound_on_inherited_colorings() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut extracted = 0;
    for _ in 0..60 {
        let k = rng.gen_range(2..=3);
        let c = rng.gen_range(2..=3);
        let points = random_points(&mut rng, 11);
        let (limit, terms) = points.split_last().unwrap();
        let seq = MonotoneSequence::new(terms.to_vec(), limit.clone()).unwrap();
        let chi = inherited_coloring(&seq, k, c, &mut rng);
        assert!(validate_monotone(&seq, &chi).unwrap().is_pass());
        let m = rng.gen_range(k..=k + 2);
        if let Some(set) = erdos_rado_extract(&seq, &chi, m).unwrap() {
            extracted += 1;
            assert_eq!(set.len(), m);
            assert!(set.contains(limit));
            assert!(brute_monochromatic(&set, &chi));
        }
    }
    assert!(extracted > 30);
}

#[test]
fn limit_search_results_avoid_special_triples() {
    let pts: Vec<_> = (1..=24).map(enumerate).collect();
    let eps = [Rational::ratio(1, 2), Rational::ratio(1, 4)];
    for chi in [&SierpinskiPair as &dyn Coloring] {
        if let Some(found) = find_limit_monochromatic(&pts, chi, 4, &eps).unwrap() {
            assert!(found.witness.verify());
            assert!(found.monochromatic);
            assert!(brute_monochromatic(&found.witness.set, chi));
            assert_eq!(contains_special_triple(&found.witness.set).unwrap(), None);
        }
    }
    let constant = Constant::new(2, 2).unwrap();
    let geometric = [0, 1, 2, 4, 8].map(|d| if d == 0 { Rational::zero() } else { Rational::ratio(1, d) });
    let got = find_limit_monochromatic(&geometric, &constant, 5, &[Rational::ratio(1, 1), Rational::ratio(1, 2), Rational::ratio(1, 4)])
        .unwrap()
        .unwrap();
    assert_eq!(got.witness.hub, Rational::zero());
}

#[test]
fn six_point_ramsey_and_pentagon() {
    let report = classical::six_points().unwrap();
    assert_eq!(report.colorings, 32_768);
    assert_eq!(report.with_triangle, 32_768);
    assert_eq!(classical::pentagon().unwrap(), None);
}

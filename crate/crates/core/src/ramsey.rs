//! Monotone sequences, exhaustive monochromatic search and the Erdős–Rado
//! extraction step.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;

use itertools::Itertools;

use crate::coloring::{collapse, common_color, Color, Coloring, KSubset, TableColoring};
use crate::space::rank;
use crate::{Error, Rational, Result, Verdict};

/// Terms `u_1, ..., u_m` (1-based positions) with a limit candidate `u_ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneSequence {
    terms: Vec<Rational>,
    limit: Rational,
}

impl MonotoneSequence {
    /// All terms and the limit must be pairwise distinct.
    pub fn new(terms: Vec<Rational>, limit: Rational) -> Result<Self> {
        let mut all: Vec<&Rational> = terms.iter().chain(core::iter::once(&limit)).collect();
        all.sort();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0].clone()));
        }
        Ok(MonotoneSequence { terms, limit })
    }

    pub fn terms(&self) -> &[Rational] {
        &self.terms
    }

    pub fn limit(&self) -> &Rational {
        &self.limit
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A `(k-1)`-set of positions and a later position `alpha` where swapping
/// the limit for `u_alpha` changes the color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneViolation {
    pub indices: Vec<usize>,
    pub alpha: usize,
    pub limit_color: Color,
    pub term_color: Color,
}

impl fmt::Display for MonotoneViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "indices {:?} with limit color {} but with term {} color {}",
            self.indices, self.limit_color, self.alpha, self.term_color
        )
    }
}

/// Checks that for every `(k-1)`-set `A` of positions and every `alpha`
/// past `max(A)`, `χ(u_A ∪ {u_ω}) = χ(u_A ∪ {u_alpha})`.
pub fn validate_monotone<C: Coloring + ?Sized>(
    seq: &MonotoneSequence,
    chi: &C,
) -> Result<Verdict<MonotoneViolation>> {
    let k = chi.arity();
    if k < 2 {
        return Err(Error::Arity {
            expected: 2,
            found: k,
        });
    }
    if seq.len() < k - 1 {
        return Err(Error::Parameter(format!(
            "a sequence of {} terms is too short for arity {k}",
            seq.len()
        )));
    }
    for positions in (0..seq.len()).combinations(k - 1) {
        let base = KSubset::new(positions.iter().map(|&i| seq.terms[i].clone()).collect())?;
        let limit_color = chi.color(&base.with(&seq.limit)?)?;
        let last = *positions.last().expect("k - 1 >= 1 positions");
        for alpha in last + 1..seq.len() {
            let term_color = chi.color(&base.with(&seq.terms[alpha])?)?;
            if term_color != limit_color {
                return Ok(Verdict::Fail(MonotoneViolation {
                    indices: positions.iter().map(|i| i + 1).collect(),
                    alpha: alpha + 1,
                    limit_color,
                    term_color,
                }));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Passes iff `d(u_alpha, u_ω) < rate[alpha - 1]` for every term. Failure
/// carries the first offending 1-based position.
pub fn validate_limit(seq: &MonotoneSequence, rate: &[Rational]) -> Result<Verdict<usize>> {
    if rate.len() < seq.len() {
        return Err(Error::Parameter(format!(
            "rate has {} entries for {} terms",
            rate.len(),
            seq.len()
        )));
    }
    if rate.iter().any(|r| !r.is_positive()) || rate.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Parameter(
            "rate must be positive and non-increasing".into(),
        ));
    }
    Ok(seq
        .terms
        .iter()
        .zip(rate)
        .position(|(u, bound)| u.distance(&seq.limit) >= *bound)
        .map_or(Verdict::Pass, |i| Verdict::Fail(i + 1)))
}

/// `2^(1-alpha)` for `alpha = first, first + 1, ...`; `first` may be 0.
pub fn halving_rate(first: usize, len: usize) -> Vec<Rational> {
    (first..first + len)
        .map(|alpha| match alpha {
            0 => Rational::integer(2),
            a => Rational::inverse_power_of_two(a - 1),
        })
        .collect()
}

/// Sorts by enumeration rank and drops duplicates.
fn by_rank(points: &[Rational]) -> Vec<Rational> {
    let mut ranked: Vec<(u64, Rational)> = points.iter().map(|p| (rank(p), p.clone())).collect();
    ranked.sort_by_key(|(n, _)| *n);
    ranked.dedup_by_key(|(n, _)| *n);
    ranked.into_iter().map(|(_, p)| p).collect()
}

/// Visits every monochromatic `m`-subset of `points` in rank-lexicographic
/// order, each listed in rank order, until `visit` breaks.
///
/// Backtracks over points sorted by rank; a partial set is abandoned as soon
/// as one of its completed `k`-subsets disagrees with the committed color.
pub fn for_each_monochromatic<C, F>(points: &[Rational], chi: &C, m: usize, mut visit: F) -> Result<()>
where
    C: Coloring + ?Sized,
    F: FnMut(&[Rational], Option<Color>) -> ControlFlow<()>,
{
    let k = chi.arity();
    if k == 0 {
        return Err(Error::Parameter("coloring arity must be positive".into()));
    }
    if m < k {
        return Err(Error::Parameter(format!(
            "target size {m} is below the arity {k}"
        )));
    }
    let pool = by_rank(points);
    if pool.len() < m {
        return Ok(());
    }
    let mut chosen: Vec<Rational> = Vec::with_capacity(m);
    let mut colors: Vec<Option<Color>> = Vec::with_capacity(m);
    let _ = search(&pool, 0, chi, m, &mut chosen, &mut colors, &mut visit)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn search<C, F>(
    pool: &[Rational],
    from: usize,
    chi: &C,
    m: usize,
    chosen: &mut Vec<Rational>,
    colors: &mut Vec<Option<Color>>,
    visit: &mut F,
) -> Result<ControlFlow<()>>
where
    C: Coloring + ?Sized,
    F: FnMut(&[Rational], Option<Color>) -> ControlFlow<()>,
{
    if chosen.len() == m {
        return Ok(visit(chosen, colors.last().copied().flatten()));
    }
    let k = chi.arity();
    let need = m - chosen.len();
    for i in from..=pool.len() - need {
        let candidate = &pool[i];
        let mut committed = colors.last().copied().flatten();
        let mut consistent = true;
        if chosen.len() + 1 >= k {
            for rest in chosen.iter().cloned().combinations(k - 1) {
                let c = chi.color(&KSubset::new(rest)?.with(candidate)?)?;
                match committed {
                    None => committed = Some(c),
                    Some(prev) if prev != c => {
                        consistent = false;
                        break;
                    }
                    Some(_) => {}
                }
            }
        }
        if !consistent {
            continue;
        }
        chosen.push(candidate.clone());
        colors.push(committed);
        let flow = search(pool, i + 1, chi, m, chosen, colors, visit)?;
        chosen.pop();
        colors.pop();
        if flow.is_break() {
            return Ok(flow);
        }
    }
    Ok(ControlFlow::Continue(()))
}

/// The rank-lexicographically least monochromatic `m`-subset of `points`,
/// listed in rank order.
pub fn find_monochromatic<C: Coloring + ?Sized>(
    points: &[Rational],
    chi: &C,
    m: usize,
) -> Result<Option<Vec<Rational>>> {
    let mut found = None;
    for_each_monochromatic(points, chi, m, |set, _| {
        found = Some(set.to_vec());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Collapses `chi` onto the limit, searches the terms for an `(m-1)`-set
/// monochromatic under the collapse, and returns it with the limit added
/// (rank order). The result is re-checked against `chi` itself.
pub fn erdos_rado_extract<C: Coloring + ?Sized>(
    seq: &MonotoneSequence,
    chi: &C,
    m: usize,
) -> Result<Option<Vec<Rational>>> {
    let k = chi.arity();
    if m < k {
        return Err(Error::Parameter(format!(
            "target size {m} is below the arity {k}"
        )));
    }
    if let Verdict::Fail(v) = validate_monotone(seq, chi)? {
        return Err(Error::NotMonotone(v));
    }
    let collapsed = collapse(chi, seq.limit.clone())?;
    let Some(mut set) = find_monochromatic(&seq.terms, &collapsed, m - 1)? else {
        return Ok(None);
    };
    set.push(seq.limit.clone());
    let set = by_rank(&set);
    if common_color(chi, &set)?.is_none() {
        return Err(Error::Internal(format!(
            "extracted set {{{}}} is not monochromatic",
            crate::coloring::describe(&set)
        )));
    }
    Ok(Some(set))
}

/// A hub with, for each listed epsilon, a distinct member closer than it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitWitness {
    pub set: Vec<Rational>,
    pub hub: Rational,
    pub epsilons: Vec<Rational>,
    pub witnesses: Vec<Rational>,
}

impl LimitWitness {
    /// Re-verifies every witness exactly.
    pub fn verify(&self) -> bool {
        self.set.contains(&self.hub)
            && self.epsilons.len() == self.witnesses.len()
            && self
                .epsilons
                .iter()
                .zip(&self.witnesses)
                .all(|(eps, w)| w != &self.hub && self.set.contains(w) && w.distance(&self.hub) < *eps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitMonochromatic {
    pub witness: LimitWitness,
    /// `None` only when the set is smaller than the arity.
    pub color: Option<Color>,
    /// Independently re-checked over every k-subset of the set.
    pub monochromatic: bool,
}

/// Finds the first (rank-lexicographic) monochromatic `m`-subset that has a
/// hub with a distinct witness closer than every listed epsilon. Hubs are
/// tried in rank order; each witness is the nearest other member, ties to
/// the smaller rank.
pub fn find_limit_monochromatic<C: Coloring + ?Sized>(
    points: &[Rational],
    chi: &C,
    m: usize,
    epsilons: &[Rational],
) -> Result<Option<LimitMonochromatic>> {
    if epsilons.is_empty() {
        return Err(Error::Parameter("at least one epsilon is required".into()));
    }
    if epsilons.iter().any(|e| !e.is_positive()) || epsilons.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Parameter(
            "epsilons must be positive and non-increasing".into(),
        ));
    }
    let smallest = epsilons.last().expect("non-empty");
    let mut found = None;
    for_each_monochromatic(points, chi, m, |set, color| {
        for hub in set {
            // set is in rank order and min_by keeps the first of equal elements
            let nearest = set
                .iter()
                .filter(|p| *p != hub)
                .min_by(|a, b| a.distance(hub).cmp(&b.distance(hub)));
            let Some(nearest) = nearest else { continue };
            if nearest.distance(hub) < *smallest {
                found = Some((set.to_vec(), hub.clone(), nearest.clone(), color));
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    let Some((set, hub, nearest, color)) = found else {
        return Ok(None);
    };
    let monochromatic = common_color(chi, &set)?.is_some();
    let witness = LimitWitness {
        set,
        hub,
        epsilons: epsilons.to_vec(),
        witnesses: alloc::vec![nearest; epsilons.len()],
    };
    Ok(Some(LimitMonochromatic {
        witness,
        color,
        monochromatic,
    }))
}

/// Sanity checks against classical finite Ramsey facts.
pub mod classical {
    use super::*;

    fn pair_coloring(n: i64, mut color: impl FnMut(i64, i64) -> Color) -> TableColoring {
        let mut table = TableColoring::new(2, 2).expect("valid shape");
        for a in 0..n {
            for b in a + 1..n {
                let pair = KSubset::new(alloc::vec![Rational::integer(a), Rational::integer(b)])
                    .expect("distinct");
                table.set(pair, color(a, b)).expect("pair in range");
            }
        }
        table
    }

    fn integers(n: i64) -> Vec<Rational> {
        (0..n).map(Rational::integer).collect()
    }

    #[derive(Clone, Debug, PartialEq, Eq)]
    pub struct SixPointReport {
        pub colorings: usize,
        pub with_triangle: usize,
    }

    /// Runs every 2-coloring of the 15 pairs on 6 points through
    /// [`find_monochromatic`] with target size 3.
    pub fn six_points() -> Result<SixPointReport> {
        let points = integers(6);
        let pairs: Vec<(i64, i64)> = (0..6).tuple_combinations().collect();
        let mut with_triangle = 0;
        for mask in 0u32..1 << pairs.len() {
            let chi = pair_coloring(6, |a, b| {
                let idx = pairs.iter().position(|&p| p == (a, b)).expect("pair listed");
                ((mask >> idx) & 1) as Color
            });
            if find_monochromatic(&points, &chi, 3)?.is_some() {
                with_triangle += 1;
            }
        }
        Ok(SixPointReport {
            colorings: 1 << pairs.len(),
            with_triangle,
        })
    }

    /// The pentagon coloring of 5 points (cycle edges 0, chords 1); returns
    /// whatever monochromatic triple the search finds.
    pub fn pentagon() -> Result<Option<Vec<Rational>>> {
        let chi = pair_coloring(5, |a, b| if (b - a) % 5 == 1 || (b - a) % 5 == 4 { 0 } else { 1 });
        find_monochromatic(&integers(5), &chi, 3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{Constant, DistanceTriple, RankHatTriple, SierpinskiPair};
    use crate::space::enumerate;
    use alloc::vec;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    fn seq(terms: &[Rational], limit: Rational) -> MonotoneSequence {
        MonotoneSequence::new(terms.to_vec(), limit).unwrap()
    }

    #[test]
    fn sequence_rejects_repeats() {
        assert!(MonotoneSequence::new(vec![r(1, 1), r(1, 1)], r(0, 1)).is_err());
        assert!(MonotoneSequence::new(vec![r(1, 1)], r(1, 1)).is_err());
    }

    #[test]
    fn monotone_examples() {
        let s = seq(&[r(1, 1), r(1, 2), r(1, 4), r(1, 8)], r(0, 1));
        assert!(validate_monotone(&s, &Constant::new(3, 2).unwrap()).unwrap().is_pass());
        assert!(validate_monotone(&s, &DistanceTriple).unwrap().is_pass());

        let s = seq(&[r(1, 2), r(1, 3)], r(0, 1));
        assert_eq!(
            validate_monotone(&s, &SierpinskiPair).unwrap(),
            Verdict::Fail(MonotoneViolation {
                indices: vec![1],
                alpha: 2,
                limit_color: 1,
                term_color: 0,
            })
        );
        let short = seq(&[r(1, 1)], r(0, 1));
        assert!(validate_monotone(&short, &DistanceTriple).is_err());
    }

    #[test]
    fn limit_examples() {
        let s = seq(&[r(1, 1), r(1, 2), r(1, 4)], r(0, 1));
        assert!(validate_limit(&s, &halving_rate(0, 3)).unwrap().is_pass());
        assert_eq!(validate_limit(&s, &halving_rate(1, 3)).unwrap(), Verdict::Fail(1));

        let s = seq(&[r(1, 1), r(2, 1), r(3, 1)], r(0, 1));
        let rate = [r(1, 1), r(1, 2), r(1, 3)];
        assert_eq!(validate_limit(&s, &rate).unwrap(), Verdict::Fail(1));

        let empty = seq(&[], r(0, 1));
        assert!(validate_limit(&empty, &[]).unwrap().is_pass());
        assert!(validate_limit(&s, &rate[..2]).is_err());
        assert!(validate_limit(&s, &[r(1, 2), r(1, 1), r(1, 3)]).is_err());
    }

    #[test]
    fn find_examples() {
        let first: Vec<_> = (1..=10).map(enumerate).collect();
        let got = find_monochromatic(&first, &Constant::new(2, 2).unwrap(), 5).unwrap();
        assert_eq!(got, Some(first[..5].to_vec()));

        let six: Vec<_> = (1..=6).map(enumerate).collect();
        let triple = find_monochromatic(&six, &SierpinskiPair, 3).unwrap().unwrap();
        assert_eq!(common_color(&SierpinskiPair, &triple).unwrap().map(|c| c.is_some()), Some(true));

        let many: Vec<_> = (1..=12).map(enumerate).collect();
        let chi = crate::coloring::FnColoring::new(3, 2, |p: &[Rational]| {
            RankHatTriple.color_sorted(p).unwrap() ^ 1
        })
        .unwrap();
        // all-0 under the hat coloring is all-1 under its complement
        if let Some(set) = find_monochromatic(&many, &chi, 4).unwrap() {
            assert_ne!(common_color(&RankHatTriple, &set).unwrap(), Some(Some(0)));
        }

        assert!(find_monochromatic(&first, &DistanceTriple, 2).is_err());
        assert_eq!(find_monochromatic(&first[..3], &SierpinskiPair, 4).unwrap(), None);
    }

    #[test]
    fn extract_examples() {
        let s = seq(&[r(1, 1), r(1, 2), r(1, 4), r(1, 8)], r(0, 1));
        let got = erdos_rado_extract(&s, &Constant::new(3, 2).unwrap(), 4).unwrap().unwrap();
        assert_eq!(got.len(), 4);
        assert!(got.contains(&r(0, 1)));

        let s = seq(&[r(1, 1), r(1, 2), r(1, 4), r(1, 8), r(1, 16)], r(0, 1));
        let got = erdos_rado_extract(&s, &DistanceTriple, 4).unwrap().unwrap();
        assert!(got.contains(&r(0, 1)));
        assert!(common_color(&DistanceTriple, &got).unwrap().is_some());

        let bad = seq(&[r(1, 2), r(1, 3)], r(0, 1));
        assert!(matches!(
            erdos_rado_extract(&bad, &SierpinskiPair, 2),
            Err(Error::NotMonotone(_))
        ));
    }

    #[test]
    fn limit_search_examples() {
        let pts = [r(0, 1), r(1, 1), r(1, 2), r(1, 4), r(1, 8)];
        let eps = [r(1, 1), r(1, 2), r(1, 4)];
        let got = find_limit_monochromatic(&pts, &Constant::new(2, 2).unwrap(), 5, &eps)
            .unwrap()
            .unwrap();
        assert_eq!(got.witness.hub, r(0, 1));
        assert!(got.witness.verify());
        assert!(got.monochromatic);

        assert_eq!(
            find_limit_monochromatic(&pts, &Constant::new(2, 2).unwrap(), 6, &eps).unwrap(),
            None
        );
        assert!(find_limit_monochromatic(&pts, &SierpinskiPair, 3, &[]).is_err());
    }

    #[test]
    fn classical_facts() {
        assert_eq!(classical::pentagon().unwrap(), None);
    }
}

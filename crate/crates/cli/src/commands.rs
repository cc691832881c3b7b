use std::collections::BTreeSet;

use anyhow::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use ramsey_closure_core::coloring::{common_color, Color, Coloring};
use ramsey_closure_core::counterexamples::{
    check_no_all_zero_quad, find_special_triple, refute_two_limits, verify_special_triple_colors,
    SpecialTriple,
};
use ramsey_closure_core::encoder::{decode, encode, prefix_rate, EncodeOutcome, DEFAULT_DECODE_CAP};
use ramsey_closure_core::ramsey::{
    classical, find_limit_monochromatic, find_monochromatic, validate_limit, validate_monotone,
};
use ramsey_closure_core::space::{enumerate, rank, Rationals};
use ramsey_closure_core::{Rational, Verdict};
use serde::Serialize;

use crate::config::Settings;
use crate::report::Rendered;
use crate::samples::{cluster_spec, hub_set};
use crate::trace_json::{to_json, DeltaEntry, TraceDoc};
use crate::Command;

pub fn execute(command: Command, settings: &Settings) -> Result<Rendered> {
    match command {
        Command::EncodeSweep => encode_sweep(settings),
        Command::SearchMono => search_mono(settings),
        Command::VerifyClaims => verify_claims(settings),
        Command::RamseySanity => ramsey_sanity(settings),
        Command::Trace => trace(settings),
    }
}

fn strings(points: &[Rational]) -> Vec<String> {
    points.iter().map(ToString::to_string).collect()
}

fn decode_cap(settings: &Settings) -> u64 {
    DEFAULT_DECODE_CAP.max(settings.cap)
}

#[derive(Serialize)]
struct SweepItem {
    rank: u64,
    point: String,
    outcome: &'static str,
    steps: usize,
    roundtrip: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<TraceDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct SweepSummary {
    points: usize,
    terminated: usize,
    cap_reached: usize,
    errors: usize,
    roundtrip_failures: usize,
    distinct_traces: usize,
    injective: bool,
    max_steps: usize,
    total_steps: usize,
}

fn sweep_one(chi: &dyn Coloring, rank: u64, settings: &Settings) -> SweepItem {
    let x = enumerate(rank);
    let mut item = SweepItem {
        rank,
        point: x.to_string(),
        outcome: "error",
        steps: 0,
        roundtrip: false,
        trace: None,
        error: None,
    };
    match encode(&Rationals, chi, &x, settings.cap as usize) {
        Ok(EncodeOutcome::Terminated { trace, points }) => {
            item.outcome = "terminated";
            item.steps = trace.steps();
            match decode(&Rationals, chi, &trace, decode_cap(settings)) {
                Ok(y) => item.roundtrip = y == x && points.last() == Some(&x),
                Err(e) => item.error = Some(e.to_string()),
            }
            item.trace = Some(TraceDoc::from(&trace));
        }
        Ok(EncodeOutcome::CapReached { steps, .. }) => {
            item.outcome = "cap-reached";
            item.steps = steps;
        }
        Err(e) => item.error = Some(e.to_string()),
    }
    item
}

/// Encodes and decodes the first `n` non-seed points, ranks `k..k+n-1`.
fn encode_sweep(settings: &Settings) -> Result<Rendered> {
    let chi = settings.coloring_spec().build()?;
    let k = chi.arity() as u64;
    let items: Vec<SweepItem> = (k..k + settings.n)
        .into_par_iter()
        .map(|r| sweep_one(&*chi, r, settings))
        .collect();

    let serialized: Vec<String> = items
        .iter()
        .filter_map(|it| it.trace.as_ref())
        .map(|t| serde_json::to_string(t).expect("trace serializes"))
        .collect();
    let distinct = serialized.iter().collect::<BTreeSet<_>>().len();
    let summary = SweepSummary {
        points: items.len(),
        terminated: items.iter().filter(|it| it.outcome == "terminated").count(),
        cap_reached: items.iter().filter(|it| it.outcome == "cap-reached").count(),
        errors: items.iter().filter(|it| it.error.is_some()).count(),
        roundtrip_failures: items.iter().filter(|it| !it.roundtrip).count(),
        distinct_traces: distinct,
        injective: distinct == serialized.len(),
        max_steps: items.iter().map(|it| it.steps).max().unwrap_or(0),
        total_steps: items.iter().map(|it| it.steps).sum(),
    };
    let passed = summary.terminated == summary.points
        && summary.roundtrip_failures == 0
        && summary.errors == 0
        && summary.injective;
    Ok(Rendered::new("encode-sweep", settings, passed, summary, items))
}

#[derive(Serialize)]
struct TraceStep {
    i: usize,
    u: String,
    theta: u64,
    center: String,
    radius: String,
    delta: Vec<DeltaEntry>,
    next: String,
}

#[derive(Serialize)]
struct TraceSummary {
    point: String,
    rank: u64,
    outcome: &'static str,
    seeds: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decoded: Option<String>,
    roundtrip: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<TraceDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prefix: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prefix_monotone: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prefix_converges: Option<bool>,
}

/// Encodes one point and logs every step.
fn trace(settings: &Settings) -> Result<Rendered> {
    let chi = settings.coloring_spec().build()?;
    let k = chi.arity();
    let x = match &settings.point {
        Some(p) => p.parse::<Rational>()?,
        None => enumerate(settings.n),
    };
    let seeds: Vec<Rational> = (1..k as u64).map(enumerate).collect();
    let mut summary = TraceSummary {
        point: x.to_string(),
        rank: rank(&x),
        outcome: "terminated",
        seeds: strings(&seeds),
        s: None,
        decoded: None,
        roundtrip: false,
        trace: None,
        prefix: None,
        prefix_monotone: None,
        prefix_converges: None,
    };
    let mut items = Vec::new();
    match encode(&Rationals, &*chi, &x, settings.cap as usize)? {
        EncodeOutcome::Terminated { trace, points } => {
            for (&i, &n) in trace.theta() {
                items.push(TraceStep {
                    i,
                    u: points[i - 1].to_string(),
                    theta: n,
                    center: enumerate(n).to_string(),
                    radius: Rational::inverse_power_of_two(i).to_string(),
                    delta: trace
                        .delta()
                        .iter()
                        .filter(|(key, _)| key.last() == Some(&i))
                        .map(|(key, &color)| DeltaEntry {
                            indices: key.clone(),
                            color,
                        })
                        .collect(),
                    next: points[i].to_string(),
                });
            }
            let decoded = decode(&Rationals, &*chi, &trace, decode_cap(settings))?;
            summary.s = Some(trace.steps());
            summary.roundtrip = decoded == x;
            summary.decoded = Some(decoded.to_string());
            summary.trace = Some(TraceDoc::from(&trace));
            debug_assert_eq!(serde_json::to_string(&summary.trace).ok(), Some(to_json(&trace)));
        }
        EncodeOutcome::CapReached { prefix, .. } => {
            summary.outcome = "cap-reached";
            summary.prefix = Some(strings(prefix.terms()));
            summary.prefix_monotone = Some(validate_monotone(&prefix, &*chi)?.is_pass());
            let rate = prefix_rate(k, prefix.len());
            summary.prefix_converges = Some(validate_limit(&prefix, &rate)?.is_pass());
        }
    }
    let passed = summary.roundtrip;
    Ok(Rendered::new("trace", settings, passed, summary, items))
}

#[derive(Serialize)]
struct SearchItem {
    kind: &'static str,
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    set: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    color: Option<Color>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hub: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilons: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<Vec<String>>,
    verified: bool,
}

#[derive(Serialize)]
struct SearchSummary {
    points: u64,
    m: usize,
    monochromatic_found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit_found: Option<bool>,
}

/// Searches the first `n` points for a monochromatic `m`-set, and, when
/// epsilons are configured, for one with a limit-point witness.
fn search_mono(settings: &Settings) -> Result<Rendered> {
    let chi = settings.coloring_spec().build()?;
    let points: Vec<Rational> = (1..=settings.n).map(enumerate).collect();
    let m = settings.m.expect("resolved for search-mono");
    let mut items = Vec::new();

    let mono = find_monochromatic(&points, &*chi, m)?;
    let mut item = SearchItem {
        kind: "monochromatic",
        found: mono.is_some(),
        set: None,
        color: None,
        hub: None,
        epsilons: None,
        witnesses: None,
        verified: true,
    };
    if let Some(set) = &mono {
        let color = common_color(&*chi, set)?.flatten();
        item.verified = color.is_some();
        item.color = color;
        item.set = Some(strings(set));
    }
    items.push(item);

    let mut limit_found = None;
    if !settings.epsilons.is_empty() {
        let eps: Vec<Rational> = settings
            .epsilons
            .iter()
            .map(|e| e.parse())
            .collect::<Result<_, _>>()?;
        let found = find_limit_monochromatic(&points, &*chi, m, &eps)?;
        limit_found = Some(found.is_some());
        let mut item = SearchItem {
            kind: "limit",
            found: found.is_some(),
            set: None,
            color: None,
            hub: None,
            epsilons: Some(settings.epsilons.clone()),
            witnesses: None,
            verified: true,
        };
        if let Some(f) = found {
            let recheck = common_color(&*chi, &f.witness.set)?.flatten();
            item.verified = f.monochromatic && f.witness.verify() && recheck == f.color;
            item.color = f.color;
            item.hub = Some(f.witness.hub.to_string());
            item.witnesses = Some(strings(&f.witness.witnesses));
            item.set = Some(strings(&f.witness.set));
        }
        items.push(item);
    }
    let passed = items.iter().all(|it| it.verified);
    let summary = SearchSummary {
        points: settings.n,
        m,
        monochromatic_found: mono.is_some(),
        limit_found,
    };
    Ok(Rendered::new("search-mono", settings, passed, summary, items))
}

#[derive(Serialize)]
#[serde(tag = "claim", rename_all = "kebab-case")]
enum ClaimItem {
    NoAllZeroQuad {
        points: u64,
        quads: u64,
        passed: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        counterexample: Option<Vec<String>>,
    },
    HubScan {
        hub: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        triple: Option<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pair_colors: Option<(Color, Color)>,
        #[serde(skip_serializing_if = "Option::is_none")]
        hat_color: Option<Color>,
        passed: bool,
    },
    HubSet {
        index: usize,
        hub: String,
        points: Vec<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        triple: Option<Vec<String>>,
        invariants: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        pair_colors: Option<(Color, Color)>,
        #[serde(skip_serializing_if = "Option::is_none")]
        hat_color: Option<Color>,
        passed: bool,
    },
    TwoLimits {
        index: usize,
        h: String,
        l1: String,
        l2: String,
        near_l1: Vec<String>,
        near_l2: Vec<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        one_triple: Option<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        zero_triple: Option<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        error: Option<String>,
        passed: bool,
    },
}

impl ClaimItem {
    fn passed(&self) -> bool {
        match self {
            ClaimItem::NoAllZeroQuad { passed, .. }
            | ClaimItem::HubScan { passed, .. }
            | ClaimItem::HubSet { passed, .. }
            | ClaimItem::TwoLimits { passed, .. } => *passed,
        }
    }
}

#[derive(Serialize, Default)]
struct ClaimSummary {
    quads_checked: u64,
    hubs_scanned: usize,
    hub_triples_found: usize,
    hub_sets: usize,
    clusters: usize,
    failures: usize,
}

/// Rechecks the triple from scratch: ascending, the hub at one end, and the
/// middle point enumerated after both ends.
fn triple_invariants(t: &SpecialTriple, hub: &Rational) -> bool {
    let [a, b, c] = t.points();
    a < b && b < c && (a == hub || c == hub) && rank(b) > rank(a) && rank(b) > rank(c)
}

fn special_triple_colors(t: &SpecialTriple) -> (Option<(Color, Color)>, Option<Color>, bool) {
    match verify_special_triple_colors(t) {
        Ok(colors) => (Some(colors.pair_colors), Some(colors.hat_color), true),
        Err(_) => (None, None, false),
    }
}

fn triple_strings(t: &SpecialTriple) -> Vec<String> {
    t.points().iter().map(|p| p.to_string()).collect()
}

fn binomial4(n: u64) -> u64 {
    if n < 4 {
        0
    } else {
        n * (n - 1) * (n - 2) * (n - 3) / 24
    }
}

/// Runs the verifiers for the counterexample colorings: the quad check and a
/// special-triple scan over the first `n` points, seeded hub sets, and
/// seeded two-limit clusters.
fn verify_claims(settings: &Settings) -> Result<Rendered> {
    let points: Vec<Rational> = (1..=settings.n).map(enumerate).collect();
    let mut items = Vec::new();
    let mut summary = ClaimSummary::default();

    let quad = check_no_all_zero_quad(&points)?;
    summary.quads_checked = binomial4(settings.n);
    items.push(ClaimItem::NoAllZeroQuad {
        points: settings.n,
        quads: summary.quads_checked,
        passed: quad.is_pass(),
        counterexample: match quad {
            Verdict::Pass => None,
            Verdict::Fail(q) => Some(strings(&q)),
        },
    });

    for hub in &points {
        let triple = find_special_triple(&points, hub)?;
        summary.hubs_scanned += 1;
        let item = match triple {
            None => ClaimItem::HubScan {
                hub: hub.to_string(),
                triple: None,
                pair_colors: None,
                hat_color: None,
                passed: true,
            },
            Some(t) => {
                summary.hub_triples_found += 1;
                let (pair_colors, hat_color, ok) = special_triple_colors(&t);
                ClaimItem::HubScan {
                    hub: hub.to_string(),
                    triple: Some(triple_strings(&t)),
                    pair_colors,
                    hat_color,
                    passed: ok && triple_invariants(&t, hub),
                }
            }
        };
        items.push(item);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    rng.set_stream(1);
    for index in 0..settings.hub_sets.unwrap_or(0) {
        let set = hub_set(&mut rng);
        let triple = find_special_triple(&set.points, &set.hub)?;
        let (triple_s, invariants, pair_colors, hat_color, ok) = match &triple {
            None => (None, false, None, None, false),
            Some(t) => {
                let (pc, hc, ok) = special_triple_colors(t);
                (Some(triple_strings(t)), triple_invariants(t, &set.hub), pc, hc, ok)
            }
        };
        summary.hub_sets += 1;
        items.push(ClaimItem::HubSet {
            index,
            hub: set.hub.to_string(),
            points: strings(&set.points),
            triple: triple_s,
            invariants,
            pair_colors,
            hat_color,
            passed: invariants && ok,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    rng.set_stream(2);
    for index in 0..settings.clusters.unwrap_or(0) {
        let spec = cluster_spec(&mut rng, index);
        let outcome = refute_two_limits(&spec);
        summary.clusters += 1;
        items.push(ClaimItem::TwoLimits {
            index,
            h: spec.h().to_string(),
            l1: spec.l1().to_string(),
            l2: spec.l2().to_string(),
            near_l1: strings(spec.near_l1()),
            near_l2: strings(spec.near_l2()),
            one_triple: outcome.as_ref().ok().map(|r| strings(&r.one_triple)),
            zero_triple: outcome.as_ref().ok().map(|r| strings(&r.zero_triple)),
            error: outcome.as_ref().err().map(ToString::to_string),
            passed: outcome.is_ok(),
        });
    }

    summary.failures = items.iter().filter(|it| !it.passed()).count();
    let passed = summary.failures == 0;
    Ok(Rendered::new("verify-claims", settings, passed, summary, items))
}

#[derive(Serialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
enum SanityItem {
    SixPoints {
        colorings: usize,
        with_triangle: usize,
        passed: bool,
    },
    Pentagon {
        #[serde(skip_serializing_if = "Option::is_none")]
        triangle: Option<Vec<String>>,
        passed: bool,
    },
}

#[derive(Serialize)]
struct SanitySummary {
    checks: usize,
    failures: usize,
}

fn ramsey_sanity(settings: &Settings) -> Result<Rendered> {
    let six = classical::six_points()?;
    let pentagon = classical::pentagon()?;
    let items = vec![
        SanityItem::SixPoints {
            colorings: six.colorings,
            with_triangle: six.with_triangle,
            passed: six.colorings == 1 << 15 && six.with_triangle == six.colorings,
        },
        SanityItem::Pentagon {
            passed: pentagon.is_none(),
            triangle: pentagon.as_deref().map(strings),
        },
    ];
    let failures = items
        .iter()
        .filter(|it| !matches!(it, SanityItem::SixPoints { passed: true, .. } | SanityItem::Pentagon { passed: true, .. }))
        .count();
    let summary = SanitySummary {
        checks: items.len(),
        failures,
    };
    Ok(Rendered::new("ramsey-sanity", settings, failures == 0, summary, items))
}

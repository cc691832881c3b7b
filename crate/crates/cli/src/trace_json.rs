//! Plain-text JSON form of an encoding trace:
//! `{"k":..,"s":..,"theta":{"i":n,..},"delta":[{"indices":[..],"color":c},..]}`.
//!
//! Map keys and list entries are emitted in ascending order, so equal traces
//! serialize to identical bytes.

use std::collections::BTreeMap;

use ramsey_closure_core::coloring::Color;
use ramsey_closure_core::encoder::EncodingTrace;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDoc {
    pub k: usize,
    pub s: usize,
    pub theta: BTreeMap<usize, u64>,
    pub delta: Vec<DeltaEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaEntry {
    pub indices: Vec<usize>,
    pub color: Color,
}

impl From<&EncodingTrace> for TraceDoc {
    fn from(t: &EncodingTrace) -> Self {
        TraceDoc {
            k: t.arity(),
            s: t.steps(),
            theta: t.theta().clone(),
            delta: t
                .delta()
                .iter()
                .map(|(indices, &color)| DeltaEntry {
                    indices: indices.clone(),
                    color,
                })
                .collect(),
        }
    }
}

impl TryFrom<TraceDoc> for EncodingTrace {
    type Error = ramsey_closure_core::Error;

    fn try_from(doc: TraceDoc) -> Result<Self, Self::Error> {
        let mut delta = BTreeMap::new();
        for entry in doc.delta {
            if !entry.indices.windows(2).all(|w| w[0] < w[1]) {
                return Err(ramsey_closure_core::Error::MalformedTrace(format!(
                    "delta indices {:?} are not strictly ascending",
                    entry.indices
                )));
            }
            if delta.insert(entry.indices.clone(), entry.color).is_some() {
                return Err(ramsey_closure_core::Error::MalformedTrace(format!(
                    "delta indices {:?} listed twice",
                    entry.indices
                )));
            }
        }
        EncodingTrace::new(doc.k, doc.s, doc.theta, delta)
    }
}

pub fn to_json(trace: &EncodingTrace) -> String {
    serde_json::to_string(&TraceDoc::from(trace)).expect("trace serializes")
}

pub fn from_json(text: &str) -> anyhow::Result<EncodingTrace> {
    let doc: TraceDoc = serde_json::from_str(text)?;
    Ok(EncodingTrace::try_from(doc)?)
}

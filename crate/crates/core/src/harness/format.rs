//! The JSON instance format.
//!
//! ```json
//! {
//!   "v": 1,
//!   "meta": { "name": "k2" },
//!   "host": {
//!     "nodes": ["a", "b", "c"],
//!     "terminals": ["a", "b"],
//!     "edges": { "a|b": [1, 3] },
//!     "default_label": 2
//!   },
//!   "profile": { "setting": "local", "strategies": { "a": [["a", "b", 1]] } }
//! }
//! ```
//!
//! Edge keys are "u|v"; pairs missing from `edges` get `default_label`.
//! Labels are normalized on load, and profile labels are read in the file's
//! own numbering.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Setting, StrategyProfile};
use crate::temporal::{HostGraph, Label, NodeId, TemporalGraph, TimeEdge};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HostSpec {
    pub nodes: Vec<NodeId>,
    pub terminals: Vec<NodeId>,
    #[serde(default)]
    pub edges: BTreeMap<String, Vec<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_label: Option<Label>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub setting: Setting,
    #[serde(default)]
    pub strategies: BTreeMap<NodeId, Vec<TimeEdge>>,
}

/// The raw file contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub v: u32,
    #[serde(default)]
    pub meta: Meta,
    pub host: HostSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileSpec>,
}

/// A validated host with an optional profile.
#[derive(Clone, Debug)]
pub struct Instance {
    pub meta: Meta,
    pub host: HostGraph,
    pub profile: Option<StrategyProfile>,
}

impl Instance {
    pub fn new(name: impl Into<String>, host: HostGraph, profile: Option<StrategyProfile>) -> Self {
        Instance {
            meta: Meta {
                name: Some(name.into()),
                source: None,
            },
            host,
            profile,
        }
    }

    pub fn name(&self) -> &str {
        self.meta.name.as_deref().unwrap_or("unnamed")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Instance::from_file(serde_json::from_str(text)?)
    }

    /// Pretty-printed canonical JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.to_file()).expect("serializable");
        out.push('\n');
        out
    }

    pub fn from_file(file: InstanceFile) -> Result<Self> {
        if file.v != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {}", file.v)));
        }
        let spec = file.host;
        let mut g = TemporalGraph::new(spec.nodes.iter().cloned())?;
        if g.node_count() != spec.nodes.len() {
            return Err(Error::Format("duplicate node ids".into()));
        }
        for (key, labels) in &spec.edges {
            let (a, b) = key
                .split_once('|')
                .ok_or_else(|| Error::Format(format!("edge key {key:?} is not \"u|v\"")))?;
            let (a, b) = (NodeId::new(a)?, NodeId::new(b)?);
            if g.labels(&a, &b).is_some() {
                return Err(Error::Format(format!("edge {key:?} listed twice")));
            }
            if labels.is_empty() {
                return Err(Error::Format(format!("edge {key:?} has no labels")));
            }
            for &l in labels {
                g.add_time_edge(&TimeEdge::new(a.clone(), b.clone(), l)?)?;
            }
        }
        if let Some(d) = spec.default_label {
            let nodes = g.nodes().to_vec();
            for (i, a) in nodes.iter().enumerate() {
                for b in &nodes[i + 1..] {
                    if g.labels(a, b).is_none() {
                        g.add_time_edge(&TimeEdge::new(a.clone(), b.clone(), d)?)?;
                    }
                }
            }
        }
        let terminals: BTreeSet<NodeId> = spec.terminals.iter().cloned().collect();
        let (host, map) = HostGraph::normalize(g, terminals)?;
        let profile = file
            .profile
            .map(|p| {
                let strategies = p
                    .strategies
                    .into_iter()
                    .map(|(v, es)| {
                        let es = es
                            .iter()
                            .map(|e| {
                                map.apply(e)
                                    .ok_or_else(|| Error::InvalidPurchase(e.clone()))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok((v, es))
                    })
                    .collect::<Result<Vec<_>>>()?;
                StrategyProfile::from_strategies(p.setting, &host, strategies)
            })
            .transpose()?;
        Ok(Instance {
            meta: file.meta,
            host,
            profile,
        })
    }

    /// The most frequent single label becomes `default_label` (smallest on
    /// ties) and only the other pairs are listed. Empty strategies are omitted.
    pub fn to_file(&self) -> InstanceFile {
        let g = self.host.graph();
        let mut counts: BTreeMap<Label, usize> = BTreeMap::new();
        for (_, _, set) in g.edges() {
            if set.len() == 1 {
                *counts.entry(*set.first().expect("nonempty")).or_default() += 1;
            }
        }
        let default_label = counts
            .iter()
            .max_by(|(la, ca), (lb, cb)| ca.cmp(cb).then(lb.cmp(la)))
            .map(|(&l, _)| l);
        let edges = g
            .edges()
            .filter(|(_, _, set)| !(set.len() == 1 && set.first().copied() == default_label))
            .map(|(a, b, set)| (format!("{a}|{b}"), set.iter().copied().collect()))
            .collect();
        let profile = self.profile.as_ref().map(|s| ProfileSpec {
            setting: s.setting(),
            strategies: s
                .strategies()
                .filter(|(_, es)| !es.is_empty())
                .map(|(v, es)| (v.clone(), es.iter().cloned().collect()))
                .collect(),
        });
        InstanceFile {
            v: FORMAT_VERSION,
            meta: self.meta.clone(),
            host: HostSpec {
                nodes: self.host.nodes().to_vec(),
                terminals: self.host.terminals().iter().cloned().collect(),
                edges,
                default_label,
            },
            profile,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::{node, te};

    const SAMPLE: &str = r#"{
        "v": 1,
        "meta": {"name": "sample"},
        "host": {
            "nodes": ["a", "b", "c"],
            "terminals": ["a", "b"],
            "edges": {"a|b": [10, 30]},
            "default_label": 20
        },
        "profile": {"setting": "local", "strategies": {"a": [["a", "b", 10]]}}
    }"#;

    #[test]
    fn parse_normalizes_labels() {
        let inst = Instance::from_json(SAMPLE).unwrap();
        assert_eq!(inst.name(), "sample");
        assert_eq!(inst.host.lifetime(), 3);
        assert_eq!(
            inst.host.labels(&node("a"), &node("c")).unwrap(),
            &BTreeSet::from([2])
        );
        let s = inst.profile.unwrap();
        assert_eq!(s.strategy(&node("a")), &BTreeSet::from([te("a", "b", 1)]));
    }

    #[test]
    fn emit_round_trips() {
        let inst = Instance::from_json(SAMPLE).unwrap();
        let text = inst.to_json();
        let back = Instance::from_json(&text).unwrap();
        assert_eq!(back.host.graph(), inst.host.graph());
        assert_eq!(back.profile, inst.profile);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"default_label\": 2"));
    }

    #[test]
    fn rejects_bad_files() {
        let incomplete = SAMPLE.replace(",\n            \"default_label\": 20", "");
        assert!(matches!(
            Instance::from_json(&incomplete),
            Err(Error::IncompleteHost(..))
        ));
        let version = SAMPLE.replace("\"v\": 1", "\"v\": 2");
        assert!(matches!(
            Instance::from_json(&version),
            Err(Error::Format(_))
        ));
        let key = SAMPLE.replace("a|b", "a-b");
        assert!(matches!(Instance::from_json(&key), Err(Error::Format(_))));
        let unknown = SAMPLE.replace("\"a\": [[\"a\", \"b\", 10]]", "\"a\": [[\"a\", \"b\", 11]]");
        assert!(matches!(
            Instance::from_json(&unknown),
            Err(Error::InvalidPurchase(_))
        ));
        let extra = SAMPLE.replace("\"v\": 1,", "\"v\": 1, \"x\": 0,");
        assert!(Instance::from_json(&extra).is_err());
    }
}

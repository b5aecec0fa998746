//! Instance and allocation files.
//!
//! Both are JSON. Written files are canonical: sorted keys, sorted vertex
//! lists, two-space indentation, LF line endings and a trailing newline.
//! Exact values are written as `"p/q"` strings; instance utilities that are
//! integers are written as plain numbers.

use std::collections::{BTreeMap, BTreeSet};

use conmms::verify::Certificate;
use conmms::{AgentDraft, Allocation, GoodsGraph, Instance, InstanceDraft, Packing, Value, VertexSet};
use serde::Deserialize;
use serde_json::{json, Map, Number, Value as Json};

use crate::{CliError, CliResult};

pub fn parse_value(s: &str) -> CliResult<Value> {
    s.trim().parse::<Value>().map_err(|e| CliError::parse(format!("bad rational {s:?}: {e}")))
}

/// Always `p/q`, also for integers.
pub fn ratio_string(v: &Value) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

fn utility_json(v: &Value) -> Json {
    if v.is_integer() {
        if let Ok(n) = v.numer().to_string().parse::<u64>() {
            return Json::Number(n.into());
        }
    }
    Json::String(ratio_string(v))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawScalar {
    Number(Number),
    Text(String),
}

impl RawScalar {
    fn id(&self) -> CliResult<String> {
        match self {
            RawScalar::Number(n) if n.is_u64() => Ok(n.to_string()),
            RawScalar::Number(n) => Err(CliError::parse(format!("vertex id {n} is not a nonnegative integer"))),
            RawScalar::Text(s) => Ok(s.clone()),
        }
    }

    fn value(&self) -> CliResult<Value> {
        match self {
            RawScalar::Number(n) if n.is_i64() || n.is_u64() => parse_value(&n.to_string()),
            RawScalar::Number(n) => Err(CliError::parse(format!("{n} is not an integer; write fractions as \"p/q\""))),
            RawScalar::Text(s) => parse_value(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    vertices: Vec<RawScalar>,
    edges: Vec<(RawScalar, RawScalar)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAgent {
    id: usize,
    #[serde(rename = "type", default)]
    type_label: Option<String>,
    utilities: BTreeMap<String, RawScalar>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    graph: RawGraph,
    agents: Vec<RawAgent>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentEntry {
    pub id: usize,
    pub type_label: Option<String>,
    pub utilities: BTreeMap<String, Value>,
}

/// An instance as it appears on disk. Vertex ids are strings; integer ids
/// in the input are read as their decimal spelling.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub agents: Vec<AgentEntry>,
}

fn json_error(what: &str, e: serde_json::Error) -> CliError {
    CliError::parse(format!("{what}: {e}"))
}

impl InstanceFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let raw: RawInstance = serde_json::from_str(text).map_err(|e| json_error("instance file", e))?;
        let vertices = raw.graph.vertices.iter().map(RawScalar::id).collect::<CliResult<_>>()?;
        let edges = raw.graph.edges.iter().map(|(a, b)| Ok((a.id()?, b.id()?))).collect::<CliResult<_>>()?;
        let agents = raw
            .agents
            .into_iter()
            .map(|a| {
                let utilities =
                    a.utilities.iter().map(|(k, v)| Ok((k.clone(), v.value()?))).collect::<CliResult<_>>()?;
                Ok(AgentEntry { id: a.id, type_label: a.type_label, utilities })
            })
            .collect::<CliResult<_>>()?;
        let mut file = InstanceFile { vertices, edges, agents };
        file.canonicalize();
        Ok(file)
    }

    /// Sorts vertices, orients every edge from the smaller id and sorts the
    /// edges and agents.
    pub fn canonicalize(&mut self) {
        self.vertices.sort();
        for e in &mut self.edges {
            if e.1 < e.0 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
        }
        self.edges.sort();
        self.agents.sort_by_key(|a| a.id);
    }

    pub fn to_instance(&self) -> CliResult<Instance<Value>> {
        let invalid = |e: conmms::Error| CliError::parse(format!("invalid instance: {e}"));
        let graph =
            GoodsGraph::new(self.vertices.iter().cloned(), self.edges.iter().map(|(a, b)| (a, b))).map_err(invalid)?;
        let agents = self
            .agents
            .iter()
            .map(|a| AgentDraft { id: a.id, type_label: a.type_label.clone(), utilities: a.utilities.clone() })
            .collect();
        InstanceDraft { graph, agents }.build().map_err(invalid)
    }

    /// Type labels are the type indices when `labels` is set.
    pub fn from_instance(inst: &Instance<Value>, labels: bool) -> Self {
        let g = &inst.graph;
        let mut file = InstanceFile {
            vertices: g.ids().to_vec(),
            edges: g.edges().map(|(a, b)| (g.id(a).to_string(), g.id(b).to_string())).collect(),
            agents: inst
                .agents
                .iter()
                .map(|a| AgentEntry {
                    id: a.id,
                    type_label: labels.then(|| a.type_id.to_string()),
                    utilities: g.ids().iter().cloned().zip(a.utility.iter().cloned()).collect(),
                })
                .collect(),
        };
        file.canonicalize();
        file
    }

    pub fn to_json(&self) -> String {
        let agents: Vec<Json> = self
            .agents
            .iter()
            .map(|a| {
                let mut m = Map::new();
                m.insert("id".into(), json!(a.id));
                if let Some(t) = &a.type_label {
                    m.insert("type".into(), json!(t));
                }
                let u: Map<String, Json> = a.utilities.iter().map(|(k, v)| (k.clone(), utility_json(v))).collect();
                m.insert("utilities".into(), Json::Object(u));
                Json::Object(m)
            })
            .collect();
        let doc = json!({
            "graph": {"vertices": self.vertices, "edges": self.edges.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>()},
            "agents": agents,
        });
        pretty(&doc)
    }
}

fn pretty(doc: &Json) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    agent: usize,
    vertices: Vec<RawScalar>,
    value: String,
    mms: String,
    ratio: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAllocation {
    alpha_target: String,
    min_ratio: String,
    bundles: Vec<RawBundle>,
    unassigned: Vec<RawScalar>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BundleEntry {
    pub agent: usize,
    pub vertices: Vec<String>,
    pub value: Value,
    pub mms: Value,
    pub ratio: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationFile {
    pub alpha_target: Value,
    pub min_ratio: Value,
    pub bundles: Vec<BundleEntry>,
    pub unassigned: Vec<String>,
}

impl AllocationFile {
    pub fn from_certificate(graph: &GoodsGraph, cert: &Certificate<Value>) -> Self {
        let names = |set: &VertexSet| set.iter().map(|&v| graph.id(v).to_string()).collect::<Vec<_>>();
        let held: VertexSet = cert.per_agent.iter().flat_map(|l| l.bundle.iter().copied()).collect();
        AllocationFile {
            alpha_target: cert.alpha_target.clone(),
            min_ratio: cert.min_ratio.clone(),
            bundles: cert
                .per_agent
                .iter()
                .map(|l| BundleEntry {
                    agent: l.agent,
                    vertices: names(&l.bundle),
                    value: l.value.clone(),
                    mms: l.mms.clone(),
                    ratio: l.ratio.clone(),
                })
                .collect(),
            unassigned: names(&graph.all_vertices().difference(&held).copied().collect()),
        }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let raw: RawAllocation = serde_json::from_str(text).map_err(|e| json_error("allocation file", e))?;
        let ids = |list: &[RawScalar]| -> CliResult<Vec<String>> {
            let mut v: Vec<String> = list.iter().map(RawScalar::id).collect::<CliResult<_>>()?;
            v.sort();
            Ok(v)
        };
        let mut bundles = raw
            .bundles
            .iter()
            .map(|b| {
                Ok(BundleEntry {
                    agent: b.agent,
                    vertices: ids(&b.vertices)?,
                    value: parse_value(&b.value)?,
                    mms: parse_value(&b.mms)?,
                    ratio: parse_value(&b.ratio)?,
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        bundles.sort_by_key(|b| b.agent);
        Ok(AllocationFile {
            alpha_target: parse_value(&raw.alpha_target)?,
            min_ratio: parse_value(&raw.min_ratio)?,
            bundles,
            unassigned: ids(&raw.unassigned)?,
        })
    }

    /// The bundles as an allocation of `graph`; unknown vertex ids are a
    /// parse error.
    pub fn to_allocation(&self, graph: &GoodsGraph) -> CliResult<Allocation<Value>> {
        let bundles = self
            .bundles
            .iter()
            .map(|b| {
                let set = graph
                    .lookup_set(b.vertices.iter().map(String::as_str))
                    .map_err(|e| CliError::parse(format!("bundle of agent {}: {e}", b.agent)))?;
                Ok((b.agent, set))
            })
            .collect::<CliResult<_>>()?;
        Ok(Allocation {
            packing: Packing::new(bundles),
            target_alpha: self.alpha_target.clone(),
            per_agent_ratio: self.bundles.iter().map(|b| (b.agent, b.ratio.clone())).collect(),
        })
    }

    /// Disagreements between the stated figures and `cert`.
    pub fn mismatches(&self, cert: &Certificate<Value>) -> Vec<String> {
        let mut out = Vec::new();
        let lines: BTreeMap<usize, _> = cert.per_agent.iter().map(|l| (l.agent, l)).collect();
        for b in &self.bundles {
            let Some(l) = lines.get(&b.agent) else { continue };
            for (what, stated, actual) in
                [("value", &b.value, &l.value), ("mms", &b.mms, &l.mms), ("ratio", &b.ratio, &l.ratio)]
            {
                if stated != actual {
                    out.push(format!("agent {}: stated {what} {stated}, actual {actual}", b.agent));
                }
            }
        }
        if self.min_ratio != cert.min_ratio {
            out.push(format!("stated min_ratio {}, actual {}", self.min_ratio, cert.min_ratio));
        }
        let held: BTreeSet<&str> = self.bundles.iter().flat_map(|b| b.vertices.iter().map(String::as_str)).collect();
        if self.unassigned.iter().any(|v| held.contains(v.as_str())) {
            out.push("a vertex is listed both in a bundle and as unassigned".into());
        }
        out
    }

    pub fn to_json(&self) -> String {
        let bundles: Vec<Json> = self
            .bundles
            .iter()
            .map(|b| {
                json!({
                    "agent": b.agent,
                    "vertices": b.vertices,
                    "value": ratio_string(&b.value),
                    "mms": ratio_string(&b.mms),
                    "ratio": ratio_string(&b.ratio),
                })
            })
            .collect();
        pretty(&json!({
            "alpha_target": ratio_string(&self.alpha_target),
            "min_ratio": ratio_string(&self.min_ratio),
            "bundles": bundles,
            "unassigned": self.unassigned,
        }))
    }
}

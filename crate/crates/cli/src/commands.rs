//! One function per subcommand. Each takes file contents rather than paths
//! and returns the text for standard output.

use std::fmt::Write as _;

use conmms::dispatch::{self, AllocClass};
use conmms::generate::{generate, GenSpec};
use conmms::graphs::{block_cut_tree, recognize as classify, GraphClass};
use conmms::oracle::{mms, mms_records, pmms_via_components, OracleConfig};
use conmms::verify::{check_allocation, Certificate};
use conmms::{GoodsGraph, Value, VertexSet};

use crate::files::{ratio_string, AllocationFile, InstanceFile};
use crate::{CliError, CliResult, Status};

pub fn read_file(path: &std::path::Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn names(graph: &GoodsGraph, set: &VertexSet) -> String {
    let ids: Vec<&str> = graph.names(set);
    format!("[{}]", ids.join(","))
}

fn name_lists<'a>(graph: &GoodsGraph, sets: impl IntoIterator<Item = &'a VertexSet>) -> String {
    let inner: Vec<String> = sets.into_iter().map(|s| names(graph, s)).collect();
    format!("[{}]", inner.join(","))
}

/// One line per finding: size and connectivity, then the multipartite,
/// split and block structure where present.
pub fn recognize(text: &str) -> CliResult<String> {
    let inst = InstanceFile::parse(text)?.to_instance()?;
    let g = &inst.graph;
    let w = classify(g);
    let mut out = String::new();
    let connected = w.has(GraphClass::Connected);
    writeln!(out, "vertices={} edges={} connected={connected}", g.len(), g.edge_count()).unwrap();
    if let (true, Some(parts)) = (w.has(GraphClass::CompleteMultipartite), &w.parts) {
        let sizes: Vec<String> = parts.iter().map(|p| p.len().to_string()).collect();
        writeln!(out, "complete_multipartite parts=[{}] members={}", sizes.join(","), name_lists(g, parts)).unwrap();
    }
    if let (true, Some((k, i))) = (w.has(GraphClass::Split), &w.split_pair) {
        writeln!(out, "split K={} I={}", names(g, k), names(g, i)).unwrap();
    }
    if connected {
        let shapes = [
            GraphClass::Complete,
            GraphClass::Cycle,
            GraphClass::Tree,
            GraphClass::Cactus,
            GraphClass::BlockGraph,
            GraphClass::BlockCactus,
        ];
        let flags: Vec<&str> = shapes.iter().filter(|&&c| w.has(c)).map(|c| c.name()).collect();
        let tree = block_cut_tree(g)?;
        let mut line = flags.join(" ");
        if !line.is_empty() {
            line.push(' ');
        }
        write!(
            line,
            "blocks={} cut_vertices={} terminal={}",
            tree.blocks.len(),
            names(g, &tree.cut_vertices),
            tree.terminal_blocks.len()
        )
        .unwrap();
        writeln!(out, "{line}").unwrap();
    }
    Ok(out)
}

/// The maximin share of every agent, or of one, with a witness partition.
/// Where the graph has more components than agents the share is undefined
/// and the packing share is printed instead.
pub fn mms_report(text: &str, agent: Option<usize>, config: &OracleConfig) -> CliResult<String> {
    let inst = InstanceFile::parse(text)?.to_instance()?;
    let agents: Vec<_> = match agent {
        Some(id) => vec![inst.agent(id).ok_or_else(|| CliError::new(Status::Unsupported, format!("no agent {id}")))?],
        None => inst.agents.iter().collect(),
    };
    let g = &inst.graph;
    let mut out = String::new();
    for a in agents {
        match mms(g, a, inst.n(), config) {
            Ok(r) => {
                writeln!(out, "agent {} mms={} partition={}", a.id, ratio_string(&r.value), name_lists(g, &r.bundles()))
            }
            Err(conmms::Error::UndefinedMms { .. }) => {
                let (value, parts) = pmms_via_components(g, &g.all_vertices(), &a.utility, inst.n(), config)?;
                writeln!(
                    out,
                    "agent {} mms=undefined pmms={} packing={}",
                    a.id,
                    ratio_string(&value),
                    name_lists(g, &parts)
                )
            }
            Err(e) => return Err(e.into()),
        }
        .unwrap();
    }
    Ok(out)
}

fn summary(class: Option<AllocClass>, cert: &Certificate<Value>) -> String {
    let mut out = String::new();
    if let Some(c) = class {
        write!(out, "class={c} ").unwrap();
    }
    writeln!(
        out,
        "alpha={} min_ratio={} structural_ok={} pass={}",
        ratio_string(&cert.alpha_target),
        ratio_string(&cert.min_ratio),
        cert.structural_ok,
        cert.passes()
    )
    .unwrap();
    for n in &cert.notes {
        writeln!(out, "note: {n}").unwrap();
    }
    out
}

pub struct Allocated {
    pub class: AllocClass,
    pub file: AllocationFile,
    pub summary: String,
    pub status: Status,
}

/// Runs the allocator for `class` and certifies the result against freshly
/// computed shares.
pub fn allocate(text: &str, class: AllocClass, config: &OracleConfig) -> CliResult<Allocated> {
    let inst = InstanceFile::parse(text)?.to_instance()?;
    let out = dispatch::allocate(&inst, class, config)?;
    let records = mms_records(&inst, config)?;
    let cert = check_allocation(&inst, &out.outcome.allocation, &out.alpha, &records);
    let status = if cert.passes() { Status::Pass } else { Status::CertificateFailure };
    Ok(Allocated {
        class: out.class,
        file: AllocationFile::from_certificate(&inst.graph, &cert),
        summary: summary(Some(out.class), &cert),
        status,
    })
}

/// Re-checks an allocation file. Stated figures that disagree with the
/// recomputed ones fail the check too.
pub fn verify(instance: &str, allocation: &str, alpha: &Value, config: &OracleConfig) -> CliResult<(String, Status)> {
    let inst = InstanceFile::parse(instance)?.to_instance()?;
    let file = AllocationFile::parse(allocation)?;
    let alloc = file.to_allocation(&inst.graph)?;
    let records = mms_records(&inst, config)?;
    let cert = check_allocation(&inst, &alloc, alpha, &records);
    let mismatches = file.mismatches(&cert);
    let mut text = summary(None, &cert);
    for m in &mismatches {
        writeln!(text, "mismatch: {m}").unwrap();
    }
    let status = if cert.passes() && mismatches.is_empty() { Status::Pass } else { Status::CertificateFailure };
    Ok((text, status))
}

/// A canonical instance file. Agents carry their type index as label.
pub fn gen(spec: &GenSpec) -> CliResult<String> {
    let inst = generate::<Value>(spec)?;
    Ok(InstanceFile::from_instance(&inst, true).to_json())
}

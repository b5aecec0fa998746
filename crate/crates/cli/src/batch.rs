//! Batches of generated trials, one CSV row each.

use std::time::Instant;

use conmms::dispatch::AllocClass;
use conmms::generate::GenSpec;
use conmms::oracle::OracleConfig;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::commands;
use crate::files::ratio_string;
use crate::{CliError, CliResult, Status};

/// `count` trials with seeds `seed, seed + 1, ...`. The allocator class
/// defaults to the generated class.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialSpec {
    pub class: String,
    #[serde(default)]
    pub allocator: Option<String>,
    pub seed: u64,
    #[serde(default = "one")]
    pub count: u64,
    pub vertices: usize,
    pub agents: usize,
    pub max_utility: u32,
    #[serde(default)]
    pub min_utility: u32,
    #[serde(default)]
    pub types: Option<usize>,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchConfig {
    #[serde(default)]
    pub trials: Vec<TrialSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub instance_id: String,
    pub class: String,
    pub n_agents: usize,
    pub n_vertices: usize,
    pub n_types: usize,
    pub alpha_target: String,
    pub min_ratio: String,
    pub pass: bool,
    pub runtime_ms: u128,
}

const HEADER: [&str; 9] =
    ["instance_id", "class", "n_agents", "n_vertices", "n_types", "alpha_target", "min_ratio", "pass", "runtime_ms"];

struct Trial {
    id: String,
    spec: GenSpec,
    allocator: AllocClass,
}

fn parse_class(s: &str) -> CliResult<AllocClass> {
    s.parse().map_err(|e: conmms::Error| CliError::parse(e.to_string()))
}

fn expand(config: &BatchConfig) -> CliResult<Vec<Trial>> {
    let mut out = Vec::new();
    for (i, t) in config.trials.iter().enumerate() {
        let class = parse_class(&t.class)?;
        let allocator = t.allocator.as_deref().map(parse_class).transpose()?.unwrap_or(class);
        for s in t.seed..t.seed + t.count {
            let spec = GenSpec {
                class,
                seed: s,
                vertices: t.vertices,
                agents: t.agents,
                min_utility: t.min_utility,
                max_utility: t.max_utility,
                types: t.types,
            };
            out.push(Trial { id: format!("{i}-{}-{s}", class.name()), spec, allocator });
        }
    }
    Ok(out)
}

/// Trials whose allocator fails outright get an empty `min_ratio` and
/// `pass = false`, like a failed certificate.
fn run_trial(t: &Trial, config: &OracleConfig) -> CliResult<(Row, Option<String>)> {
    let start = Instant::now();
    let inst = conmms::generate::generate::<conmms::Value>(&t.spec)?;
    let text = crate::files::InstanceFile::from_instance(&inst, true).to_json();
    let (class, alpha, min_ratio, pass, err) = match commands::allocate(&text, t.allocator, config) {
        Ok(a) => (
            a.class.name().to_string(),
            ratio_string(&a.file.alpha_target),
            ratio_string(&a.file.min_ratio),
            a.status == Status::Pass,
            None,
        ),
        Err(e) => (t.allocator.name().to_string(), String::new(), String::new(), false, Some(e.message)),
    };
    let row = Row {
        instance_id: t.id.clone(),
        class,
        n_agents: inst.n(),
        n_vertices: inst.graph.len(),
        n_types: inst.type_count(),
        alpha_target: alpha,
        min_ratio,
        pass,
        runtime_ms: start.elapsed().as_millis(),
    };
    Ok((row, err))
}

pub struct BatchResult {
    pub rows: Vec<Row>,
    pub errors: Vec<String>,
    pub status: Status,
}

/// Runs every trial, in parallel, keeping rows in config order. Bad
/// generator parameters abort the batch before any trial runs.
pub fn run_batch(config_text: &str, config: &OracleConfig) -> CliResult<BatchResult> {
    let cfg: BatchConfig = if config_text.trim().is_empty() {
        BatchConfig::default()
    } else {
        serde_json::from_str(config_text).map_err(|e| CliError::parse(format!("batch config: {e}")))?
    };
    let trials = expand(&cfg)?;
    for t in &trials {
        conmms::generate::generate::<conmms::Value>(&t.spec)
            .map_err(|e| CliError::new(Status::Unsupported, format!("trial {}: {e}", t.id)))?;
    }
    let results: Vec<(Row, Option<String>)> =
        trials.par_iter().map(|t| run_trial(t, config)).collect::<CliResult<_>>()?;
    let status = if results.iter().all(|(r, _)| r.pass) { Status::Pass } else { Status::CertificateFailure };
    let errors = results.iter().filter_map(|(r, e)| e.as_ref().map(|e| format!("{}: {e}", r.instance_id))).collect();
    Ok(BatchResult { rows: results.into_iter().map(|(r, _)| r).collect(), errors, status })
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(HEADER).expect("writing to memory");
    for r in rows {
        w.serialize(r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("CSV output is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_a_header_only() {
        for text in ["", "{}", r#"{"trials": []}"#] {
            let r = run_batch(text, &OracleConfig::default()).unwrap();
            assert!(r.rows.is_empty());
            assert_eq!(to_csv(&r.rows), format!("{}\n", HEADER.join(",")));
        }
    }

    #[test]
    fn mixed_classes_keep_config_order() {
        let text = r#"{"trials": [
            {"class": "split", "seed": 3, "count": 3, "vertices": 8, "agents": 2, "max_utility": 9},
            {"class": "block-cactus", "seed": 0, "count": 2, "vertices": 7, "agents": 3, "max_utility": 9},
            {"class": "multipartite", "allocator": "auto", "seed": 5, "vertices": 6, "agents": 2, "max_utility": 9}
        ]}"#;
        let r = run_batch(text, &OracleConfig::default()).unwrap();
        let ids: Vec<&str> = r.rows.iter().map(|r| r.instance_id.as_str()).collect();
        assert_eq!(
            ids,
            ["0-split-3", "0-split-4", "0-split-5", "1-block-cactus-0", "1-block-cactus-1", "2-multipartite-5"]
        );
        assert!(r.rows[..3].iter().all(|r| r.class == "split"));
        assert!(r.rows[3..5].iter().all(|r| r.class == "block-cactus" && r.alpha_target == "1/2"));
        assert_eq!(r.status, Status::Pass);
        assert!(r.rows.iter().all(|r| r.pass));
    }

    #[test]
    fn infeasible_trials_abort_the_batch() {
        let text = r#"{"trials": [{"class": "split", "seed": 0, "vertices": 0, "agents": 2, "max_utility": 9}]}"#;
        assert_eq!(run_batch(text, &OracleConfig::default()).err().unwrap().status, Status::Unsupported);
        let text = r#"{"trials": [{"class": "tree", "seed": 0, "vertices": 3, "agents": 2, "max_utility": 9}]}"#;
        assert_eq!(run_batch(text, &OracleConfig::default()).err().unwrap().status, Status::Parse);
    }
}

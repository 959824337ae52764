//! JSON report shapes. Every report carries `schema_version`.

use mapr::rational;
use mapr::solvers::Trace;
use mapr::{Committee, Instance, Rational};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

pub fn names(instance: &Instance, committee: &Committee) -> Vec<String> {
    committee.names(instance.db()).into_iter().map(str::to_string).collect()
}

fn index_names(instance: &Instance, indices: &[usize]) -> Vec<String> {
    indices
        .iter()
        .map(|&c| instance.db().candidate(c).name().to_string())
        .collect()
}

#[derive(Debug, Serialize)]
pub struct ValueRow {
    pub value: String,
    pub seats: usize,
    pub share: String,
    pub target: String,
}

#[derive(Debug, Serialize)]
pub struct AttributeRow {
    pub attribute: String,
    pub values: Vec<ValueRow>,
}

pub fn representation(instance: &Instance, committee: &Committee) -> mapr::Result<Vec<AttributeRow>> {
    let r = instance.representation(committee)?;
    let schema = instance.schema();
    Ok(schema
        .attributes()
        .iter()
        .enumerate()
        .map(|(i, attr)| AttributeRow {
            attribute: attr.name().to_string(),
            values: attr
                .values()
                .iter()
                .enumerate()
                .map(|(j, label)| ValueRow {
                    value: label.clone(),
                    seats: r.seats(i, j),
                    share: rational::format(&r.share(i, j)),
                    target: rational::format(instance.target().share(i, j)),
                })
                .collect(),
        })
        .collect())
}

#[derive(Debug, Serialize)]
pub struct SwapOut {
    pub removed: Vec<String>,
    pub added: Vec<String>,
    pub loss: String,
}

#[derive(Debug, Serialize)]
pub struct TraceOut {
    pub iterations: u64,
    pub swaps_examined: u64,
    pub nodes: u64,
    pub swaps: Vec<SwapOut>,
}

impl TraceOut {
    pub fn new(instance: &Instance, trace: &Trace) -> Self {
        Self {
            iterations: trace.iterations,
            swaps_examined: trace.swaps_examined,
            nodes: trace.nodes,
            swaps: trace
                .swaps
                .iter()
                .map(|s| SwapOut {
                    removed: index_names(instance, &s.removed),
                    added: index_names(instance, &s.added),
                    loss: rational::format(&s.loss),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub algorithm: &'static str,
    pub loss_kind: &'static str,
    /// `optimal`, `local_optimum`, `stopped`, `feasible` or `infeasible`.
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loss: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub committee: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optima: Option<Vec<Vec<String>>>,
    pub truncated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representation: Option<Vec<AttributeRow>>,
    pub trace: TraceOut,
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct ApportionReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub quota: &'static str,
    pub k: usize,
    pub seats: Vec<usize>,
    pub tied: Vec<Vec<usize>>,
    pub ideal: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Finding {
    pub committee: Vec<String>,
    pub details: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct AxiomReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub check: &'static str,
    pub loss_kind: &'static str,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optima_checked: Option<usize>,
    pub violations: Vec<Finding>,
}

#[derive(Debug, Serialize)]
pub struct TransformReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub committee: Vec<String>,
    pub original: LossTriple,
    pub transformed: LossTriple,
    pub l1_ratio: String,
    pub l1max_ratio: String,
    pub lmax_equal: bool,
}

#[derive(Debug, Serialize)]
pub struct LossTriple {
    pub l1: String,
    pub l1max: String,
    pub lmax: String,
}

impl LossTriple {
    pub fn new(values: &[Rational; 3]) -> Self {
        Self {
            l1: rational::format(&values[0]),
            l1max: rational::format(&values[1]),
            lmax: rational::format(&values[2]),
        }
    }
}

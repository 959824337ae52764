use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::{Attribute, AttributeSchema, Candidate, CandidateDatabase, Instance, TargetDistribution};
use crate::rational::ratio;

fn indicator_target(schema: &AttributeSchema, k: usize) -> Result<TargetDistribution> {
    let k = k as i64;
    TargetDistribution::new(schema, vec![vec![ratio(k - 1, k), ratio(1, k)]; schema.len()])
}

/// Exact cover by 3-sets. Elements are `0..universe_size`; one binary
/// attribute per element, one candidate per set, `k = universe_size / 3`
/// and target `(1 − 1/k, 1/k)`. A perfect committee exists iff the sets
/// contain an exact cover.
pub fn from_x3c(universe_size: usize, sets: &[[usize; 3]]) -> Result<Instance> {
    if universe_size == 0 || !universe_size.is_multiple_of(3) {
        return Err(Error::Domain(format!(
            "universe size must be a positive multiple of 3, got {universe_size}"
        )));
    }
    if sets.is_empty() {
        return Err(Error::EmptyInput("set list"));
    }
    for (s, set) in sets.iter().enumerate() {
        let distinct: HashSet<usize> = set.iter().copied().collect();
        if distinct.len() != 3 || set.iter().any(|&e| e >= universe_size) {
            return Err(Error::Domain(format!(
                "set {} = {set:?} is not a 3-subset of 0..{universe_size}",
                s + 1
            )));
        }
    }
    let schema = AttributeSchema::new(
        (1..=universe_size)
            .map(|e| Attribute::new(format!("e{e}"), ["0", "1"]))
            .collect(),
    )?;
    let candidates = sets
        .iter()
        .enumerate()
        .map(|(s, set)| {
            let values = (0..universe_size).map(|e| usize::from(set.contains(&e))).collect();
            Candidate::new(format!("S{}", s + 1), values)
        })
        .collect();
    let db = CandidateDatabase::new(schema.clone(), candidates)?;
    let k = universe_size / 3;
    Instance::new(db, indicator_target(&schema, k)?, k)
}

/// Perfect codes of size `k`. One binary attribute and one candidate per
/// vertex; a candidate has value `1` on its closed neighbourhood and the
/// target is `(1 − 1/k, 1/k)`.
pub fn from_perfect_code(vertices: usize, edges: &[(usize, usize)], k: usize) -> Result<Instance> {
    if vertices == 0 {
        return Err(Error::EmptyInput("vertex list"));
    }
    if k == 0 {
        return Err(Error::Domain("code size k must be at least 1".into()));
    }
    let mut closed: Vec<Vec<usize>> = (0..vertices)
        .map(|v| {
            let mut row = vec![0; vertices];
            row[v] = 1;
            row
        })
        .collect();
    let mut seen = HashSet::new();
    for &(u, v) in edges {
        if u >= vertices || v >= vertices {
            return Err(Error::Domain(format!("edge ({u}, {v}) leaves the vertex range")));
        }
        if u == v {
            return Err(Error::Domain(format!("self-loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::Domain(format!("repeated edge ({u}, {v})")));
        }
        closed[u][v] = 1;
        closed[v][u] = 1;
    }
    let schema = AttributeSchema::new(
        (1..=vertices)
            .map(|v| Attribute::new(format!("v{v}"), ["0", "1"]))
            .collect(),
    )?;
    let candidates = closed
        .into_iter()
        .enumerate()
        .map(|(u, row)| Candidate::new(format!("v{}", u + 1), row))
        .collect();
    let db = CandidateDatabase::new(schema.clone(), candidates)?;
    Instance::new(db, indicator_target(&schema, k)?, k)
}

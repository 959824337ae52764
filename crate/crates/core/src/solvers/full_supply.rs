use std::collections::HashMap;

use crate::apportionment::{largest_remainder, QuotaKind};
use crate::error::{Error, Result};
use crate::model::{CandidateDatabase, Committee, Instance, LossKind};

use super::report::{Algorithm, SolveReport, Trace};

/// True iff every vector of `D_1 × … × D_p` is realised by at least `k`
/// candidates.
pub fn full_supply_check(db: &CandidateDatabase, k: usize) -> bool {
    let needed = match db.schema().domain_product() {
        Some(n) => n,
        None => return false,
    };
    if needed.saturating_mul(k as u128) > db.len() as u128 {
        return false;
    }
    let mut counts: HashMap<&[usize], usize> = HashMap::new();
    for c in db.candidates() {
        *counts.entry(c.values()).or_default() += 1;
    }
    counts.len() as u128 == needed && counts.values().all(|&n| n >= k)
}

/// Per attribute, `t_i(j)` is the value at which the cumulative Hamilton
/// seat count first reaches `j`; slot `j` is then filled by a fresh
/// candidate with vector `(t_1(j), …, t_p(j))`.
pub fn solve_full_supply(instance: &Instance, kind: LossKind) -> Result<SolveReport> {
    let (db, k) = (instance.db(), instance.k());
    if !full_supply_check(db, k) {
        return Err(Error::Precondition(format!(
            "full supply fails: some value vector has fewer than {k} candidates"
        )));
    }
    let thresholds = (0..instance.schema().len())
        .map(|i| {
            let seats = largest_remainder(instance.target().attribute(i), k, QuotaKind::Hare)?.canonical;
            Ok(seats
                .seats()
                .iter()
                .enumerate()
                .flat_map(|(value, &n)| std::iter::repeat_n(value, n))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut pools: HashMap<&[usize], std::slice::Iter<'_, usize>> = HashMap::new();
    let mut by_vector: HashMap<&[usize], Vec<usize>> = HashMap::new();
    for (idx, c) in db.candidates().iter().enumerate() {
        by_vector.entry(c.values()).or_default().push(idx);
    }
    for (v, members) in &by_vector {
        pools.insert(v, members.iter());
    }
    let mut members = Vec::with_capacity(k);
    for slot in 0..k {
        let vector: Vec<usize> = thresholds.iter().map(|t| t[slot]).collect();
        let next = pools
            .get_mut(vector.as_slice())
            .and_then(Iterator::next)
            .expect("full supply guarantees k candidates per vector");
        members.push(*next);
    }
    let committee = Committee::new(members)?;
    let loss = instance.loss_of(kind, &committee)?;
    Ok(SolveReport {
        committees: vec![committee],
        loss,
        kind,
        algorithm: Algorithm::FullSupply,
        trace: Trace {
            nodes: k as u64,
            ..Trace::default()
        },
        seed: None,
        truncated: false,
    })
}

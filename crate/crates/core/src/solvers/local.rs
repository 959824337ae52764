use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{binomial, next_combination, subsets};
use crate::error::{Error, Result};
use crate::eval::{LossEvaluator, Score};
use crate::model::{Committee, Instance, LossKind};
use crate::par;

use super::report::{Algorithm, SolveReport, SolverConfig, Swap, Trace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSearchParams {
    /// Swap radius `ℓ`.
    pub radius: usize,
    pub seed: u64,
    pub initial: Option<Committee>,
    /// Maximum accepted swaps; `None` runs to a local optimum.
    pub max_iter: Option<u64>,
}

impl LocalSearchParams {
    pub fn new(radius: usize, seed: u64) -> Self {
        Self {
            radius,
            seed,
            initial: None,
            max_iter: None,
        }
    }

    pub fn with_initial(mut self, initial: Committee) -> Self {
        self.initial = Some(initial);
        self
    }
}

/// `k` distinct candidates drawn uniformly from `0..m` with a seeded
/// ChaCha8 generator.
pub fn sample_committee(m: usize, k: usize, seed: u64) -> Result<Committee> {
    if k > m {
        return Err(Error::NoCommittee { k, m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Committee::new(rand::seq::index::sample(&mut rng, m, k).into_vec())
}

struct Move {
    removed: Vec<usize>,
    added: Vec<usize>,
    score: Score,
    /// Canonical position of the move within the scan.
    position: u64,
}

/// First strictly improving swap in canonical order: sizes `1..=ℓ`, then
/// removed subsets of the committee in lexicographic order, then added
/// subsets of the outside candidates in lexicographic order.
fn first_improvement(
    instance: &Instance,
    ev: &LossEvaluator,
    members: &[usize],
    counts: &[u32],
    current: &Score,
    radius: usize,
    config: &SolverConfig,
) -> (Option<Move>, u64) {
    let db = instance.db();
    let outside: Vec<usize> = (0..db.len()).filter(|c| members.binary_search(c).is_err()).collect();
    let mut scanned = 0u64;
    for size in 1..=radius.min(members.len()).min(outside.len()) {
        let removals = subsets(members, size);
        let per_removal = binomial(outside.len(), size).expect("small neighbourhood") as u64;
        let try_removal = |r: usize| -> Option<(Vec<usize>, u64, Score)> {
            let mut base = counts.to_vec();
            for &c in &removals[r] {
                for f in db.flat_values(c) {
                    base[f] -= 1;
                }
            }
            let mut combo: Vec<usize> = (0..size).collect();
            let mut rank = 0u64;
            loop {
                let mut next = base.clone();
                for &p in &combo {
                    for f in db.flat_values(outside[p]) {
                        next[f] += 1;
                    }
                }
                let score = ev.score(&next);
                if score < *current {
                    return Some((combo.iter().map(|&p| outside[p]).collect(), rank, score));
                }
                rank += 1;
                if !next_combination(&mut combo, outside.len()) {
                    return None;
                }
            }
        };
        let hit = par::find_first(config.execution, removals.len(), |r| try_removal(r).is_some());
        match hit {
            Some(r) => {
                let (added, rank, score) = try_removal(r).expect("found above");
                let position = scanned + r as u64 * per_removal + rank;
                let mv = Move {
                    removed: removals[r].clone(),
                    added,
                    score,
                    position,
                };
                return (Some(mv), position + 1);
            }
            None => scanned += removals.len() as u64 * per_removal,
        }
    }
    (None, scanned)
}

/// ℓ-swap local search. Deterministic for fixed parameters; parallel and
/// sequential execution return identical reports.
pub fn local_search(
    instance: &Instance,
    kind: LossKind,
    params: &LocalSearchParams,
    config: &SolverConfig,
) -> Result<SolveReport> {
    if params.radius == 0 {
        return Err(Error::Parameter("swap radius must be at least 1".into()));
    }
    instance.require_committees()?;
    let (m, k) = (instance.db().len(), instance.k());
    let start = match &params.initial {
        Some(c) => {
            c.validate(instance.db())?;
            if c.len() != k {
                return Err(Error::Parameter(format!(
                    "initial committee has {} members, k = {k}",
                    c.len()
                )));
            }
            c.clone()
        }
        None => sample_committee(m, k, params.seed)?,
    };
    let ev = LossEvaluator::new(instance, kind);
    let mut members = start.members().to_vec();
    let mut counts = instance.db().tally(&members);
    let mut score = ev.score(&counts);
    let mut trace = Trace::default();
    let mut truncated = false;
    loop {
        let (found, examined) = first_improvement(instance, &ev, &members, &counts, &score, params.radius, config);
        let Some(mv) = found else {
            trace.swaps_examined += examined;
            break;
        };
        if params.max_iter.is_some_and(|max| trace.iterations >= max) {
            truncated = true;
            break;
        }
        trace.swaps_examined += examined;
        trace.iterations += 1;
        debug_assert_eq!(examined, mv.position + 1);
        for &c in &mv.removed {
            for f in instance.db().flat_values(c) {
                counts[f] -= 1;
            }
        }
        for &c in &mv.added {
            for f in instance.db().flat_values(c) {
                counts[f] += 1;
            }
        }
        members.retain(|c| !mv.removed.contains(c));
        members.extend_from_slice(&mv.added);
        members.sort_unstable();
        score = mv.score;
        trace.swaps.push(Swap {
            removed: mv.removed,
            added: mv.added,
            loss: ev.to_rational(&score),
        });
    }
    trace.nodes = trace.swaps_examined;
    Ok(SolveReport {
        committees: vec![Committee::from_sorted(members)],
        loss: ev.to_rational(&score),
        kind,
        algorithm: Algorithm::LocalSearch,
        trace,
        seed: params.initial.is_none().then_some(params.seed),
        truncated,
    })
}

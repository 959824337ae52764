use crate::combinatorics::{binomial, next_combination, unrank};
use crate::error::{Error, Result};
use crate::eval::{LossEvaluator, Score};
use crate::model::{Committee, Instance, LossKind};
use crate::par;

use super::report::{Algorithm, SolveReport, SolverConfig, Trace};

const CHUNK: u128 = 4096;

struct ChunkBest {
    score: Score,
    optima: Vec<Vec<usize>>,
    count: u64,
}

/// Exhaustive minimum over all k-subsets. With `want_all` every optimum
/// is returned, in lexicographic order, up to the enumeration limit.
pub fn brute_force(instance: &Instance, kind: LossKind, want_all: bool, config: &SolverConfig) -> Result<SolveReport> {
    instance.require_committees()?;
    let (m, k) = (instance.db().len(), instance.k());
    let total = binomial(m, k)
        .filter(|&t| t <= config.node_budget as u128)
        .ok_or_else(|| Error::Budget {
            what: "brute force",
            needed: binomial(m, k).map_or_else(|| format!("C({m}, {k})"), |t| t.to_string()),
            budget: config.node_budget,
        })?;
    let ev = LossEvaluator::new(instance, kind);
    let keep = if want_all { config.enumeration_limit.max(1) } else { 1 };
    let chunks = total.div_ceil(CHUNK) as usize;

    let results = par::map_range(config.execution, chunks, |c| {
        let start = c as u128 * CHUNK;
        let len = CHUNK.min(total - start);
        let mut combo = unrank(start, m, k);
        let mut best = ChunkBest {
            score: ev.score(&instance.db().tally(&combo)),
            optima: vec![combo.clone()],
            count: 1,
        };
        for _ in 1..len {
            next_combination(&mut combo, m);
            let score = ev.score(&instance.db().tally(&combo));
            match score.cmp(&best.score) {
                std::cmp::Ordering::Less => {
                    best.score = score;
                    best.optima.clear();
                    best.optima.push(combo.clone());
                    best.count = 1;
                }
                std::cmp::Ordering::Equal => {
                    best.count += 1;
                    if best.optima.len() < keep {
                        best.optima.push(combo.clone());
                    }
                }
                std::cmp::Ordering::Greater => {}
            }
        }
        best
    });

    let mut merged: Option<ChunkBest> = None;
    for chunk in results {
        match &mut merged {
            None => merged = Some(chunk),
            Some(best) => match chunk.score.cmp(&best.score) {
                std::cmp::Ordering::Less => *best = chunk,
                std::cmp::Ordering::Equal => {
                    best.count += chunk.count;
                    let room = keep - best.optima.len();
                    best.optima.extend(chunk.optima.into_iter().take(room));
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }
    let best = merged.expect("at least one committee");
    Ok(SolveReport {
        committees: best.optima.into_iter().map(Committee::from_sorted).collect(),
        loss: ev.to_rational(&best.score),
        kind,
        algorithm: Algorithm::BruteForce,
        trace: Trace {
            nodes: total as u64,
            ..Trace::default()
        },
        seed: None,
        truncated: want_all && best.count > keep as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::catalog;
    use crate::rational::ratio;
    use crate::Execution;

    fn names(inst: &Instance, report: &SolveReport) -> Vec<Vec<String>> {
        report
            .committees
            .iter()
            .map(|c| c.names(inst.db()).into_iter().map(String::from).collect())
            .collect()
    }

    #[test]
    fn intro_optima() {
        let inst = catalog::intro();
        let cfg = SolverConfig::default();
        let l1 = brute_force(&inst, LossKind::L1, true, &cfg).unwrap();
        assert_eq!(l1.loss, ratio(3, 5));
        assert_eq!(l1.committees.len(), 8);
        assert!(names(&inst, &l1).contains(&vec!["Ann".into(), "Donna".into(), "George".into(), "Kevin".into()]));
        let cdgk = Committee::new([2, 3, 5, 8]).unwrap();
        assert_eq!(inst.loss_of(LossKind::L1, &cdgk).unwrap(), ratio(4, 5));
        assert_eq!(inst.loss_of(LossKind::L1Max, &cdgk).unwrap(), ratio(2, 5));
        let l1max = brute_force(&inst, LossKind::L1Max, true, &cfg).unwrap();
        assert_eq!(l1max.loss, ratio(3, 10));
        assert_eq!(l1max.committees, l1.committees);
        let lmax = brute_force(&inst, LossKind::LMax, true, &cfg).unwrap();
        assert_eq!(lmax.loss, ratio(1, 5));
        assert_eq!(lmax.committees.len(), 26);
        assert!(names(&inst, &lmax).contains(&vec!["Ann".into(), "Charlie".into(), "Donna".into(), "George".into()]));
        assert_eq!(l1.trace.nodes, 210);
    }

    #[test]
    fn whole_database() {
        let inst = catalog::intro().with_k(10).unwrap();
        let r = brute_force(&inst, LossKind::L1, true, &SolverConfig::default()).unwrap();
        assert_eq!(r.committees, vec![Committee::new(0..10).unwrap()]);
    }

    #[test]
    fn modes_and_chunking_agree() {
        let inst = catalog::get("popmono-cx").unwrap().instance;
        for kind in LossKind::ALL {
            let seq = brute_force(&inst, kind, true, &SolverConfig::sequential()).unwrap();
            let par = brute_force(
                &inst,
                kind,
                true,
                &SolverConfig {
                    execution: Execution::Parallel,
                    ..SolverConfig::default()
                },
            )
            .unwrap();
            assert_eq!(seq, par);
        }
    }

    #[test]
    fn enumeration_limit_truncates() {
        let inst = catalog::get("differ-4").unwrap().instance;
        let cfg = SolverConfig {
            enumeration_limit: 2,
            ..SolverConfig::default()
        };
        let r = brute_force(&inst, LossKind::L1, true, &cfg).unwrap();
        assert_eq!(r.committees.len(), 2);
        assert!(r.truncated);
    }

    #[test]
    fn budget_and_size_errors() {
        let inst = catalog::intro();
        let cfg = SolverConfig {
            node_budget: 100,
            ..SolverConfig::default()
        };
        assert!(matches!(
            brute_force(&inst, LossKind::L1, false, &cfg),
            Err(Error::Budget { .. })
        ));
        let big = inst.with_k(11).unwrap();
        assert_eq!(
            brute_force(&big, LossKind::L1, false, &SolverConfig::default()),
            Err(Error::NoCommittee { k: 11, m: 10 })
        );
    }
}

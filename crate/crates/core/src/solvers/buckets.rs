use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::eval::{LossEvaluator, Score};
use crate::model::{is_natural, CandidateDatabase, Committee, Instance, LossKind};
use crate::par;
use crate::rational::{self, Rational};

use super::report::{Algorithm, SolveReport, SolverConfig, Trace};

/// Candidates grouped by value vector. Buckets appear in order of first
/// occurrence in the database.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BucketTable {
    vectors: Vec<Vec<usize>>,
    members: Vec<Vec<usize>>,
}

impl BucketTable {
    pub fn new(db: &CandidateDatabase) -> Self {
        let mut index: HashMap<&[usize], usize> = HashMap::new();
        let mut vectors = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (c, cand) in db.candidates().iter().enumerate() {
            let slot = *index.entry(cand.values()).or_insert_with(|| {
                vectors.push(cand.values().to_vec());
                members.push(Vec::new());
                vectors.len() - 1
            });
            members[slot].push(c);
        }
        Self { vectors, members }
    }

    /// Number of buckets `t`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, i: usize) -> &[usize] {
        &self.vectors[i]
    }

    /// Multiplicity `a_i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.members[i].len()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    pub fn members(&self, i: usize) -> &[usize] {
        &self.members[i]
    }

    /// Takes the first `b_i` candidates of every bucket.
    pub fn committee(&self, allocation: &[usize]) -> Result<Committee> {
        if allocation.len() != self.len() || allocation.iter().zip(&self.members).any(|(&b, m)| b > m.len()) {
            return Err(Error::Parameter("allocation does not fit the bucket table".into()));
        }
        Committee::new(
            allocation
                .iter()
                .zip(&self.members)
                .flat_map(|(&b, m)| m[..b].iter().copied()),
        )
    }
}

/// Result of the perfect committee search. Infeasibility is an answer, not
/// an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PerfectOutcome {
    Feasible {
        report: SolveReport,
        /// `b_i` per bucket, in table order.
        allocation: Vec<usize>,
    },
    Infeasible {
        nodes: u64,
    },
}

impl PerfectOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, PerfectOutcome::Feasible { .. })
    }

    pub fn report(&self) -> Option<&SolveReport> {
        match self {
            PerfectOutcome::Feasible { report, .. } => Some(report),
            PerfectOutcome::Infeasible { .. } => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            PerfectOutcome::Feasible { report, .. } => report.trace.nodes,
            PerfectOutcome::Infeasible { nodes } => *nodes,
        }
    }
}

/// Buckets reordered by multiplicity, descending, with suffix capacities
/// per flat value.
struct Layout {
    order: Vec<usize>,
    flat: Vec<Vec<usize>>,
    caps: Vec<usize>,
    suffix_cap: Vec<Vec<u32>>,
    suffix_total: Vec<usize>,
}

impl Layout {
    fn new(instance: &Instance, table: &BucketTable) -> Self {
        let schema = instance.schema();
        let mut order: Vec<usize> = (0..table.len()).collect();
        order.sort_by_key(|&b| std::cmp::Reverse(table.multiplicity(b)));
        let flat: Vec<Vec<usize>> = order
            .iter()
            .map(|&b| {
                table
                    .vector(b)
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| schema.offset(i) + v)
                    .collect()
            })
            .collect();
        let caps: Vec<usize> = order.iter().map(|&b| table.multiplicity(b)).collect();
        let t = order.len();
        let mut suffix_cap = vec![vec![0u32; schema.flat_len()]; t + 1];
        let mut suffix_total = vec![0usize; t + 1];
        for d in (0..t).rev() {
            suffix_cap[d] = suffix_cap[d + 1].clone();
            for &f in &flat[d] {
                suffix_cap[d][f] += caps[d] as u32;
            }
            suffix_total[d] = suffix_total[d + 1] + caps[d];
        }
        Self {
            order,
            flat,
            caps,
            suffix_cap,
            suffix_total,
        }
    }

    fn to_table_order(&self, alloc: &[usize]) -> Vec<usize> {
        let mut out = vec![0; alloc.len()];
        for (d, &b) in self.order.iter().enumerate() {
            out[b] = alloc[d];
        }
        out
    }
}

fn budget_error(what: &'static str, nodes: u64, budget: u64) -> Error {
    Error::Budget {
        what,
        needed: format!("more than {nodes}"),
        budget,
    }
}

struct FeasibilitySearch<'a> {
    layout: &'a Layout,
    need: Vec<u32>,
    alloc: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl FeasibilitySearch<'_> {
    fn run(&mut self, d: usize, remaining: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(budget_error("perfect committee search", self.nodes - 1, self.budget));
        }
        if remaining == 0 {
            return Ok(self.need.iter().all(|&n| n == 0));
        }
        if d == self.layout.order.len() {
            return Ok(false);
        }
        let flat = &self.layout.flat[d];
        let hi = flat
            .iter()
            .map(|&f| self.need[f] as usize)
            .fold(self.layout.caps[d].min(remaining), usize::min);
        for x in (0..=hi).rev() {
            if remaining - x > self.layout.suffix_total[d + 1] {
                break;
            }
            for &f in flat {
                self.need[f] -= x as u32;
            }
            let next = &self.layout.suffix_cap[d + 1];
            let fits = self.need.iter().zip(next).all(|(n, c)| n <= c);
            if fits {
                self.alloc[d] = x;
                if self.run(d + 1, remaining - x)? {
                    for &f in flat {
                        self.need[f] += x as u32;
                    }
                    return Ok(true);
                }
            }
            for &f in flat {
                self.need[f] += x as u32;
            }
        }
        self.alloc[d] = 0;
        Ok(false)
    }
}

/// Searches bucket allocations `b` with `0 ≤ b_i ≤ a_i`, `Σ b_i = k` and,
/// for every attribute value, seat count exactly `k·π_i^j`.
pub fn perfect_committee(instance: &Instance, config: &SolverConfig) -> Result<PerfectOutcome> {
    let k = instance.k();
    if !is_natural(instance.target(), k) || k > instance.db().len() {
        return Ok(PerfectOutcome::Infeasible { nodes: 0 });
    }
    let table = BucketTable::new(instance.db());
    let layout = Layout::new(instance, &table);
    let kr = rational::from_usize(k);
    let need: Vec<u32> = instance
        .target()
        .shares()
        .iter()
        .flatten()
        .map(|x| {
            let seats = (x * &kr).to_integer();
            u32::try_from(seats).expect("seat count bounded by k")
        })
        .collect();
    if need.iter().zip(&layout.suffix_cap[0]).any(|(n, c)| n > c) {
        return Ok(PerfectOutcome::Infeasible { nodes: 0 });
    }
    let mut search = FeasibilitySearch {
        layout: &layout,
        need,
        alloc: vec![0; table.len()],
        nodes: 0,
        budget: config.node_budget,
    };
    if !search.run(0, k)? {
        return Ok(PerfectOutcome::Infeasible { nodes: search.nodes });
    }
    let allocation = layout.to_table_order(&search.alloc);
    let committee = table.committee(&allocation)?;
    Ok(PerfectOutcome::Feasible {
        report: SolveReport {
            committees: vec![committee],
            loss: rational::from_usize(0),
            kind: LossKind::L1,
            algorithm: Algorithm::Perfect,
            trace: Trace {
                nodes: search.nodes,
                ..Trace::default()
            },
            seed: None,
            truncated: false,
        },
        allocation,
    })
}

struct BranchAndBound<'a> {
    layout: &'a Layout,
    ev: &'a LossEvaluator,
    collect_all: bool,
    counts: Vec<u32>,
    alloc: Vec<usize>,
    best: Option<Score>,
    found: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

impl BranchAndBound<'_> {
    /// Exact optimum of the per-attribute relaxation: each attribute may
    /// spend the remaining seats on its values independently, bounded by
    /// the remaining supply of each value.
    fn lower_bound(&self, d: usize, remaining: usize) -> Option<Score> {
        let cap = &self.layout.suffix_cap[d];
        let ev = self.ev;
        let mut total = ev.zero();
        for i in 0..ev.attribute_count() {
            let mut best: Vec<Option<Score>> = vec![None; remaining + 1];
            best[0] = Some(ev.zero());
            for f in ev.attribute_range(i) {
                let mut next: Vec<Option<Score>> = vec![None; remaining + 1];
                let limit = (cap[f] as usize).min(remaining);
                for (s, slot) in next.iter_mut().enumerate() {
                    for x in 0..=limit.min(s) {
                        if let Some(prev) = &best[s - x] {
                            let cand = ev.within(prev.clone(), ev.value_term(f, self.counts[f] + x as u32));
                            if slot.as_ref().is_none_or(|cur| cand < *cur) {
                                *slot = Some(cand);
                            }
                        }
                    }
                }
                best = next;
            }
            total = ev.across(total, best[remaining].take()?);
        }
        Some(total)
    }

    fn run(&mut self, d: usize, remaining: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(budget_error("bucket branch and bound", self.nodes - 1, self.budget));
        }
        let Some(bound) = self.lower_bound(d, remaining) else {
            return Ok(());
        };
        if let Some(best) = &self.best {
            if bound > *best || (bound == *best && !self.collect_all) {
                return Ok(());
            }
        }
        if remaining == 0 {
            match &self.best {
                Some(best) if bound == *best => self.found.push(self.alloc.clone()),
                _ => {
                    self.best = Some(bound);
                    self.found = vec![self.alloc.clone()];
                }
            }
            return Ok(());
        }
        if d == self.layout.order.len() {
            return Ok(());
        }
        let hi = self.layout.caps[d].min(remaining);
        for x in (0..=hi).rev() {
            if remaining - x > self.layout.suffix_total[d + 1] {
                break;
            }
            self.place(d, x);
            let out = self.run(d + 1, remaining - x);
            self.place(d, 0);
            out?;
        }
        Ok(())
    }

    fn place(&mut self, d: usize, x: usize) {
        let old = self.alloc[d];
        for &f in &self.layout.flat[d] {
            self.counts[f] = self.counts[f] + x as u32 - old as u32;
        }
        self.alloc[d] = x;
    }
}

struct Optima {
    score: Score,
    allocations: Vec<Vec<usize>>,
    nodes: u64,
    ev: LossEvaluator,
    table: BucketTable,
}

/// Branch and bound over bucket allocations. The first level is split
/// into independent subtrees, so node counts and results do not depend on
/// the execution mode.
fn search_optima(instance: &Instance, kind: LossKind, collect_all: bool, config: &SolverConfig) -> Result<Optima> {
    instance.require_committees()?;
    let table = BucketTable::new(instance.db());
    let layout = Layout::new(instance, &table);
    let ev = LossEvaluator::new(instance, kind);
    let k = instance.k();
    let t = table.len();
    let hi = layout.caps[0].min(k);
    let choices: Vec<usize> = (0..=hi).rev().filter(|&x| k - x <= layout.suffix_total[1]).collect();
    let branches = par::map_range(config.execution, choices.len(), |c| {
        let mut bnb = BranchAndBound {
            layout: &layout,
            ev: &ev,
            collect_all,
            counts: vec![0; instance.schema().flat_len()],
            alloc: vec![0; t],
            best: None,
            found: Vec::new(),
            nodes: 0,
            budget: config.node_budget,
        };
        bnb.place(0, choices[c]);
        bnb.run(1, k - choices[c]).map(|()| (bnb.best, bnb.found, bnb.nodes))
    });
    let mut nodes = 1u64;
    let mut best: Option<Score> = None;
    let mut allocations = Vec::new();
    for branch in branches {
        let (score, found, n) = branch?;
        nodes += n;
        let Some(score) = score else { continue };
        match &best {
            Some(b) if score > *b => {}
            Some(b) if score == *b => {
                if collect_all {
                    allocations.extend(found);
                }
            }
            _ => {
                best = Some(score);
                allocations = found;
            }
        }
    }
    if nodes > config.node_budget {
        return Err(budget_error("bucket branch and bound", nodes, config.node_budget));
    }
    let score = best.expect("k ≤ m leaves a feasible allocation");
    let allocations = allocations.iter().map(|a| layout.to_table_order(a)).collect();
    Ok(Optima {
        score,
        allocations,
        nodes,
        ev,
        table,
    })
}

/// Exact optimum by branch and bound over bucket allocations.
pub fn solve_buckets_optimal(instance: &Instance, kind: LossKind, config: &SolverConfig) -> Result<SolveReport> {
    let optima = search_optima(instance, kind, false, config)?;
    let committee = optima.table.committee(&optima.allocations[0])?;
    Ok(SolveReport {
        committees: vec![committee],
        loss: optima.ev.to_rational(&optima.score),
        kind,
        algorithm: Algorithm::Buckets,
        trace: Trace {
            nodes: optima.nodes,
            ..Trace::default()
        },
        seed: None,
        truncated: false,
    })
}

/// Every loss-optimal bucket allocation, in table order. Any committee
/// realising one of them is optimal and all optimal committees arise this
/// way.
pub fn optimal_allocations(
    instance: &Instance,
    kind: LossKind,
    config: &SolverConfig,
) -> Result<(Rational, BucketTable, Vec<Vec<usize>>)> {
    let optima = search_optima(instance, kind, true, config)?;
    let mut allocations = optima.allocations;
    allocations.sort();
    Ok((optima.ev.to_rational(&optima.score), optima.table, allocations))
}

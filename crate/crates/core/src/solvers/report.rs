use std::fmt;

use crate::model::{Committee, LossKind};
use crate::par::Execution;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    BruteForce,
    FullSupply,
    LocalSearch,
    Buckets,
    Perfect,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::BruteForce => "brute",
            Algorithm::FullSupply => "fs",
            Algorithm::LocalSearch => "local",
            Algorithm::Buckets => "buckets",
            Algorithm::Perfect => "perfect",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One accepted local-search move.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Swap {
    pub removed: Vec<usize>,
    pub added: Vec<usize>,
    /// Loss after the move.
    pub loss: Rational,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Trace {
    /// Accepted moves (local search) or 0.
    pub iterations: u64,
    /// Neighbourhood moves evaluated (local search).
    pub swaps_examined: u64,
    /// Committees or search-tree nodes visited.
    pub nodes: u64,
    pub swaps: Vec<Swap>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SolveReport {
    /// One committee, or every optimum when all were requested.
    pub committees: Vec<Committee>,
    pub loss: Rational,
    pub kind: LossKind,
    pub algorithm: Algorithm,
    pub trace: Trace,
    pub seed: Option<u64>,
    /// Set when `committees` was cut at the enumeration limit or local
    /// search stopped at its iteration budget.
    pub truncated: bool,
}

impl SolveReport {
    pub fn committee(&self) -> &Committee {
        &self.committees[0]
    }
}

/// Resource limits and execution mode shared by all solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub execution: Execution,
    /// Maximum committees (brute force) or search nodes (bucket solvers).
    pub node_budget: u64,
    /// Maximum optima returned when all are requested.
    pub enumeration_limit: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            execution: Execution::default(),
            node_budget: 50_000_000,
            enumeration_limit: 10_000,
        }
    }
}

impl SolverConfig {
    pub fn sequential() -> Self {
        Self {
            execution: Execution::Sequential,
            ..Self::default()
        }
    }
}

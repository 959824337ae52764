//! Committee solvers: exhaustive search, the full-supply decomposition,
//! ℓ-swap local search and bucket-based exact search.

mod bounds;
mod brute;
mod buckets;
mod full_supply;
mod local;
mod report;

pub use bounds::approximation_bound;
pub use brute::brute_force;
pub use buckets::{optimal_allocations, perfect_committee, solve_buckets_optimal, BucketTable, PerfectOutcome};
pub use full_supply::{full_supply_check, solve_full_supply};
pub use local::{local_search, sample_committee, LocalSearchParams};
pub use report::{Algorithm, SolveReport, SolverConfig, Swap, Trace};

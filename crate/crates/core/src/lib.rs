//! Committee selection under per-attribute target distributions.
//!
//! An [`Instance`] bundles a candidate database, a target share vector for
//! every attribute and a committee size `k`. Solvers in [`solvers`] find
//! committees minimising one of three [`LossKind`]s, [`apportionment`]
//! covers the single-attribute largest remainder case, [`axioms`] probes
//! apportionment properties and [`generators`] builds instances.
//!
//! All shares and losses are exact rationals.

pub mod apportionment;
pub mod axioms;
pub mod combinatorics;
mod error;
mod eval;
pub mod format;
pub mod generators;
pub mod model;
mod par;
pub mod rational;
pub mod solvers;
pub mod transform;

pub use error::{Error, Result};
pub use model::{
    distance, is_natural, is_perfect, loss, representation_vector, targets_from_ballots, Attribute, AttributeSchema,
    Ballot, Candidate, CandidateDatabase, Committee, Instance, LossKind, RepresentationVector, TargetDistribution,
};
pub use par::Execution;
pub use rational::Rational;

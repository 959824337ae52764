//! Instance builders: hardness reductions, seeded random instances and
//! the catalog of worked examples.

pub mod catalog;
mod random;
mod reductions;

pub use catalog::{paper_instances, CatalogEntry};
pub use random::{random_instance, RandomOptions};
pub use reductions::{from_perfect_code, from_x3c};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::apportionment::naturalize;
use crate::error::{Error, Result};
use crate::model::{Attribute, AttributeSchema, Candidate, CandidateDatabase, Instance, TargetDistribution};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RandomOptions {
    /// Include `k` copies of every value vector (needs `m ≥ k·Π q_i`).
    pub ensure_fs: bool,
    /// `Some(true)` naturalizes the target for `k`; `Some(false)` asks for
    /// a target that is not forced to be natural.
    pub natural_targets: Option<bool>,
    /// Set the target to the representation of `c1..ck`, so that those
    /// candidates form a perfect committee.
    pub plant_perfect: bool,
}

fn random_vector(rng: &mut ChaCha8Rng, domains: &[usize]) -> Vec<usize> {
    domains.iter().map(|&q| rng.random_range(0..q)).collect()
}

fn all_vectors(domains: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &q in domains {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..q).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

/// Seeded random instance with attributes `X1..Xp` (values `0..q_i`) and
/// candidates `c1..cm`.
pub fn random_instance(
    domain_sizes: &[usize],
    m: usize,
    k: usize,
    seed: u64,
    options: RandomOptions,
) -> Result<Instance> {
    if domain_sizes.is_empty() {
        return Err(Error::Parameter("at least one attribute is required".into()));
    }
    if m == 0 || k == 0 {
        return Err(Error::Parameter("m and k must be positive".into()));
    }
    if options.plant_perfect && options.natural_targets == Some(false) {
        return Err(Error::Parameter(
            "a planted perfect committee forces a natural target".into(),
        ));
    }
    if options.plant_perfect && k > m {
        return Err(Error::Parameter(format!(
            "cannot plant {k} members among {m} candidates"
        )));
    }
    let schema = AttributeSchema::new(
        domain_sizes
            .iter()
            .enumerate()
            .map(|(i, &q)| Attribute::new(format!("X{}", i + 1), (0..q).map(|v| v.to_string())))
            .collect(),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors = Vec::with_capacity(m);
    if options.ensure_fs {
        let cells = schema.domain_product().unwrap_or(u128::MAX);
        if cells.saturating_mul(k as u128) > m as u128 {
            return Err(Error::Parameter(format!(
                "full supply needs m ≥ k·Π q_i = {}, got m = {m}",
                cells.saturating_mul(k as u128)
            )));
        }
        for v in all_vectors(domain_sizes) {
            vectors.extend(std::iter::repeat_n(v, k));
        }
    }
    while vectors.len() < m {
        vectors.push(random_vector(&mut rng, domain_sizes));
    }
    vectors.shuffle(&mut rng);
    let candidates = vectors
        .into_iter()
        .enumerate()
        .map(|(c, values)| Candidate::new(format!("c{}", c + 1), values))
        .collect();
    let db = CandidateDatabase::new(schema.clone(), candidates)?;

    let target = if options.plant_perfect {
        let planted = crate::model::Committee::new(0..k)?;
        let r = crate::model::representation_vector(&db, &planted)?;
        TargetDistribution::new(&schema, r.shares())?
    } else {
        let shares = domain_sizes
            .iter()
            .map(|&q| {
                let mut weights: Vec<u32> = (0..q).map(|_| rng.random_range(0..10)).collect();
                if weights.iter().all(|&w| w == 0) {
                    let j = rng.random_range(0..q);
                    weights[j] = 1;
                }
                let total: u32 = weights.iter().sum();
                weights
                    .into_iter()
                    .map(|w| Rational::new(w.into(), total.into()))
                    .collect()
            })
            .collect();
        let raw = TargetDistribution::new(&schema, shares)?;
        if options.natural_targets == Some(true) {
            naturalize(&raw, k)?
        } else {
            raw
        }
    };
    Instance::new(db, target, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::is_natural;
    use crate::solvers::full_supply_check;

    #[test]
    fn same_seed_same_instance() {
        let opts = RandomOptions::default();
        let a = random_instance(&[2, 3], 9, 3, 42, opts).unwrap();
        let b = random_instance(&[2, 3], 9, 3, 42, opts).unwrap();
        assert_eq!(a, b);
        let c = random_instance(&[2, 3], 9, 3, 43, opts).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn options_hold_by_construction() {
        let fs = RandomOptions {
            ensure_fs: true,
            ..RandomOptions::default()
        };
        let inst = random_instance(&[2, 3], 14, 2, 1, fs).unwrap();
        assert!(full_supply_check(inst.db(), 2));

        let natural = RandomOptions {
            natural_targets: Some(true),
            ..RandomOptions::default()
        };
        let inst = random_instance(&[2, 2, 4], 10, 5, 7, natural).unwrap();
        assert!(is_natural(inst.target(), 5));
    }

    #[test]
    fn planted_committee_is_perfect() {
        let plant = RandomOptions {
            plant_perfect: true,
            ..RandomOptions::default()
        };
        for seed in 0..10 {
            let inst = random_instance(&[2, 3, 2], 12, 4, seed, plant).unwrap();
            let planted = crate::model::Committee::new(0..4).unwrap();
            assert!(crate::model::is_perfect(inst.db(), &planted, inst.target()).unwrap());
        }
    }

    #[test]
    fn inconsistent_options_are_rejected() {
        let bad = RandomOptions {
            plant_perfect: true,
            natural_targets: Some(false),
            ..RandomOptions::default()
        };
        assert!(matches!(random_instance(&[2], 4, 2, 0, bad), Err(Error::Parameter(_))));
        let fs = RandomOptions {
            ensure_fs: true,
            ..RandomOptions::default()
        };
        assert!(matches!(
            random_instance(&[2, 2], 7, 2, 0, fs),
            Err(Error::Parameter(_))
        ));
    }
}

//! Binary-domain transformation: each value `x_i^j` becomes its own binary
//! indicator attribute, value `1` carrying the target share `π_i^j`.

use crate::error::{Error, Result};
use crate::model::{
    loss, Attribute, AttributeSchema, Candidate, CandidateDatabase, Committee, Instance, LossKind,
    RepresentationVector, TargetDistribution,
};
use crate::rational::{self, Rational};

/// Where each binary attribute came from. Candidate indices are unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMapping {
    /// `(original attribute, original value)` per new attribute.
    pub origin: Vec<(usize, usize)>,
    original_domains: Vec<usize>,
}

impl BinaryMapping {
    /// Committees map by identity on candidate indices.
    pub fn map_committee(&self, committee: &Committee) -> Committee {
        committee.clone()
    }

    /// Rebuilds the original representation from the indicator counts.
    pub fn project_back(&self, binary: &RepresentationVector) -> RepresentationVector {
        let mut seats: Vec<Vec<usize>> = self.original_domains.iter().map(|&q| vec![0; q]).collect();
        for (new_attr, &(i, j)) in self.origin.iter().enumerate() {
            seats[i][j] = binary.seats(new_attr, 1);
        }
        RepresentationVector::from_seats(binary.k(), seats).expect("indicator counts partition k")
    }
}

pub fn to_binary(instance: &Instance) -> Result<(Instance, BinaryMapping)> {
    let schema = instance.schema();
    let mut attributes = Vec::with_capacity(schema.flat_len());
    let mut origin = Vec::with_capacity(schema.flat_len());
    let mut shares = Vec::with_capacity(schema.flat_len());
    let one = rational::from_usize(1);
    for (i, attr) in schema.attributes().iter().enumerate() {
        for (j, label) in attr.values().iter().enumerate() {
            attributes.push(Attribute::new(format!("{}={}", attr.name(), label), ["0", "1"]));
            origin.push((i, j));
            let pi = instance.target().share(i, j).clone();
            shares.push(vec![&one - &pi, pi]);
        }
    }
    let new_schema = AttributeSchema::new(attributes)?;
    let candidates = instance
        .db()
        .candidates()
        .iter()
        .map(|c| {
            let values = origin.iter().map(|&(i, j)| usize::from(c.values()[i] == j)).collect();
            Candidate::new(c.name(), values)
        })
        .collect();
    let db = CandidateDatabase::new(new_schema.clone(), candidates)?;
    let target = TargetDistribution::new(&new_schema, shares)?;
    let mapping = BinaryMapping {
        origin,
        original_domains: schema.domain_sizes(),
    };
    Ok((Instance::new(db, target, instance.k())?, mapping))
}

/// Loss relations between an instance and its binary transform for one
/// committee.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformIdentities {
    /// Transformed L1 over original L1; `2` when both are zero.
    pub l1_ratio: Rational,
    /// Transformed L1Max over original L1Max; `1` when both are zero.
    pub l1max_ratio: Rational,
    /// Whether the LMax losses coincide.
    pub max_equal: bool,
    pub original: [Rational; 3],
    pub transformed: [Rational; 3],
}

pub fn verify_transform_identities(instance: &Instance, committee: &Committee) -> Result<TransformIdentities> {
    let (binary, mapping) = to_binary(instance)?;
    let r = instance.representation(committee)?;
    let r_new = binary.representation(&mapping.map_committee(committee))?;
    let losses = |inst: &Instance, r: &RepresentationVector| -> Result<[Rational; 3]> {
        Ok([
            loss(LossKind::L1, inst.target(), r)?,
            loss(LossKind::L1Max, inst.target(), r)?,
            loss(LossKind::LMax, inst.target(), r)?,
        ])
    };
    let original = losses(instance, &r)?;
    let transformed = losses(&binary, &r_new)?;
    let ratio_or = |num: &Rational, den: &Rational, zero_case: i64| -> Result<Rational> {
        use num_traits::Zero;
        match (num.is_zero(), den.is_zero()) {
            (true, true) => Ok(rational::ratio(zero_case, 1)),
            (false, false) => Ok(num / den),
            _ => Err(Error::Domain(format!(
                "transformed loss {num} and original loss {den} disagree on being zero"
            ))),
        }
    };
    Ok(TransformIdentities {
        l1_ratio: ratio_or(&transformed[0], &original[0], 2)?,
        l1max_ratio: ratio_or(&transformed[1], &original[1], 1)?,
        max_equal: transformed[2] == original[2],
        original,
        transformed,
    })
}

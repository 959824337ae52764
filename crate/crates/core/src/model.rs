//! Instance data model: attribute schema, candidate database, target
//! distributions, committees, representation vectors and the three loss
//! functions.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// One attribute with its ordered, finite domain of value labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Attribute {
    name: String,
    values: Vec<String>,
}

impl Attribute {
    pub fn new<S: Into<String>>(name: impl Into<String>, values: impl IntoIterator<Item = S>) -> Self {
        Self {
            name: name.into(),
            values: values.into_iter().map(Into::into).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn domain_size(&self) -> usize {
        self.values.len()
    }

    pub fn value_index(&self, label: &str) -> Option<usize> {
        self.values.iter().position(|v| v == label)
    }
}

/// Ordered list of attributes. Value `(i, j)` is also addressed by a flat
/// index `offset(i) + j`, which the solvers use for tallies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AttributeSchema {
    attributes: Vec<Attribute>,
    offsets: Vec<usize>,
}

impl AttributeSchema {
    pub fn new(attributes: Vec<Attribute>) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::SchemaViolation("schema has no attributes".into()));
        }
        let mut names = HashSet::new();
        for attr in &attributes {
            if !names.insert(attr.name.as_str()) {
                return Err(Error::SchemaViolation(format!(
                    "duplicate attribute name `{}`",
                    attr.name
                )));
            }
            if attr.values.len() < 2 {
                return Err(Error::SchemaViolation(format!(
                    "attribute `{}` needs at least two values",
                    attr.name
                )));
            }
            let mut labels = HashSet::new();
            for v in &attr.values {
                if !labels.insert(v.as_str()) {
                    return Err(Error::SchemaViolation(format!(
                        "duplicate value `{v}` in attribute `{}`",
                        attr.name
                    )));
                }
            }
        }
        let mut offsets = Vec::with_capacity(attributes.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for attr in &attributes {
            acc += attr.values.len();
            offsets.push(acc);
        }
        Ok(Self { attributes, offsets })
    }

    /// Number of attributes `p`.
    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, i: usize) -> &Attribute {
        &self.attributes[i]
    }

    pub fn domain_size(&self, i: usize) -> usize {
        self.attributes[i].values.len()
    }

    pub fn domain_sizes(&self) -> Vec<usize> {
        self.attributes.iter().map(Attribute::domain_size).collect()
    }

    pub fn max_domain_size(&self) -> usize {
        self.attributes.iter().map(Attribute::domain_size).max().unwrap_or(0)
    }

    pub fn is_binary(&self) -> bool {
        self.attributes.iter().all(|a| a.values.len() == 2)
    }

    /// Total number of attribute values, `Σ q_i`.
    pub fn flat_len(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub(crate) fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    /// Size of the full domain `D = D_1 × … × D_p`, or `None` on overflow.
    pub fn domain_product(&self) -> Option<u128> {
        self.attributes
            .iter()
            .try_fold(1u128, |acc, a| acc.checked_mul(a.values.len() as u128))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Candidate {
    name: String,
    values: Vec<usize>,
}

impl Candidate {
    pub fn new(name: impl Into<String>, values: Vec<usize>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Value index per attribute.
    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// The candidate pool. Distinct candidates may share a value vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CandidateDatabase {
    schema: AttributeSchema,
    candidates: Vec<Candidate>,
}

impl CandidateDatabase {
    pub fn new(schema: AttributeSchema, candidates: Vec<Candidate>) -> Result<Self> {
        let mut names = HashSet::new();
        for c in &candidates {
            if !names.insert(c.name.as_str()) {
                return Err(Error::SchemaViolation(format!("duplicate candidate name `{}`", c.name)));
            }
            if c.values.len() != schema.len() {
                return Err(Error::SchemaViolation(format!(
                    "candidate `{}` has {} values, schema has {} attributes",
                    c.name,
                    c.values.len(),
                    schema.len()
                )));
            }
            for (i, &v) in c.values.iter().enumerate() {
                if v >= schema.domain_size(i) {
                    return Err(Error::SchemaViolation(format!(
                        "candidate `{}`: value index {v} out of range for attribute `{}`",
                        c.name,
                        schema.attribute(i).name
                    )));
                }
            }
        }
        Ok(Self { schema, candidates })
    }

    /// Builds a database from value labels.
    pub fn from_labels<N, L>(schema: AttributeSchema, rows: impl IntoIterator<Item = (N, Vec<L>)>) -> Result<Self>
    where
        N: Into<String>,
        L: AsRef<str>,
    {
        let mut candidates = Vec::new();
        for (name, labels) in rows {
            let name = name.into();
            if labels.len() != schema.len() {
                return Err(Error::SchemaViolation(format!(
                    "candidate `{name}` has {} values, schema has {} attributes",
                    labels.len(),
                    schema.len()
                )));
            }
            let values = labels
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    schema.attribute(i).value_index(l.as_ref()).ok_or_else(|| {
                        Error::SchemaViolation(format!(
                            "candidate `{name}`: unknown value `{}` for attribute `{}`",
                            l.as_ref(),
                            schema.attribute(i).name
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            candidates.push(Candidate::new(name, values));
        }
        Self::new(schema, candidates)
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn candidate(&self, idx: usize) -> &Candidate {
        &self.candidates[idx]
    }

    /// Number of candidates `m`.
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn candidate_index(&self, name: &str) -> Option<usize> {
        self.candidates.iter().position(|c| c.name == name)
    }

    /// Flat tally indices touched by candidate `idx`, one per attribute.
    pub(crate) fn flat_values(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let offsets = self.schema.offsets();
        self.candidates[idx]
            .values
            .iter()
            .enumerate()
            .map(move |(i, &v)| offsets[i] + v)
    }

    /// Per-value seat counts of a set of members, laid out flat.
    pub(crate) fn tally(&self, members: &[usize]) -> Vec<u32> {
        let mut counts = vec![0u32; self.schema.flat_len()];
        for &c in members {
            for f in self.flat_values(c) {
                counts[f] += 1;
            }
        }
        counts
    }
}

/// Per-attribute target shares `π_i`, each summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TargetDistribution {
    shares: Vec<Vec<Rational>>,
}

impl TargetDistribution {
    pub fn new(schema: &AttributeSchema, shares: Vec<Vec<Rational>>) -> Result<Self> {
        if shares.len() != schema.len() {
            return Err(Error::SchemaViolation(format!(
                "target covers {} attributes, schema has {}",
                shares.len(),
                schema.len()
            )));
        }
        for (i, row) in shares.iter().enumerate() {
            let attr = schema.attribute(i);
            if row.len() != attr.domain_size() {
                return Err(Error::SchemaViolation(format!(
                    "target for `{}` has {} entries, domain has {}",
                    attr.name(),
                    row.len(),
                    attr.domain_size()
                )));
            }
            if let Some(neg) = row.iter().find(|x| x.is_negative()) {
                return Err(Error::Domain(format!(
                    "negative target share {neg} for attribute `{}`",
                    attr.name()
                )));
            }
            let total: Rational = row.iter().sum();
            if total != rational::from_usize(1) {
                return Err(Error::Domain(format!(
                    "target shares for `{}` sum to {total}, not 1",
                    attr.name()
                )));
            }
        }
        Ok(Self { shares })
    }

    pub(crate) fn from_validated(shares: Vec<Vec<Rational>>) -> Self {
        Self { shares }
    }

    pub fn shares(&self) -> &[Vec<Rational>] {
        &self.shares
    }

    pub fn attribute(&self, i: usize) -> &[Rational] {
        &self.shares[i]
    }

    pub fn share(&self, i: usize, j: usize) -> &Rational {
        &self.shares[i][j]
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }

    fn matches(&self, schema: &AttributeSchema) -> bool {
        self.shares.len() == schema.len()
            && self
                .shares
                .iter()
                .enumerate()
                .all(|(i, row)| row.len() == schema.domain_size(i))
    }
}

/// A set of distinct candidate indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Committee {
    members: Vec<usize>,
}

impl Committee {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        let before = members.len();
        members.dedup();
        if members.len() != before {
            return Err(Error::SchemaViolation("committee lists a candidate twice".into()));
        }
        Ok(Self { members })
    }

    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.members.binary_search(&idx).is_ok()
    }

    pub fn validate(&self, db: &CandidateDatabase) -> Result<()> {
        match self.members.last() {
            Some(&last) if last >= db.len() => Err(Error::SchemaViolation(format!(
                "candidate index {last} out of range (database has {})",
                db.len()
            ))),
            _ => Ok(()),
        }
    }

    pub fn names<'a>(&self, db: &'a CandidateDatabase) -> Vec<&'a str> {
        self.members.iter().map(|&i| db.candidate(i).name()).collect()
    }
}

/// Value frequencies of a committee: seat counts `R_i^j` over `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RepresentationVector {
    k: usize,
    seats: Vec<Vec<usize>>,
}

impl RepresentationVector {
    pub(crate) fn from_flat(schema: &AttributeSchema, k: usize, counts: &[u32]) -> Self {
        let seats = (0..schema.len())
            .map(|i| {
                counts[schema.offset(i)..schema.offset(i + 1)]
                    .iter()
                    .map(|&c| c as usize)
                    .collect()
            })
            .collect();
        Self { k, seats }
    }

    pub fn from_seats(k: usize, seats: Vec<Vec<usize>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("committee size must be positive".into()));
        }
        if let Some(row) = seats.iter().find(|row| row.iter().sum::<usize>() != k) {
            return Err(Error::SchemaViolation(format!(
                "seat counts {row:?} do not sum to k = {k}"
            )));
        }
        Ok(Self { k, seats })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Seat count `R_i^j = k · r_i^j`.
    pub fn seats(&self, i: usize, j: usize) -> usize {
        self.seats[i][j]
    }

    pub fn seat_rows(&self) -> &[Vec<usize>] {
        &self.seats
    }

    pub fn share(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.seats[i][j].into(), self.k.into())
    }

    pub fn shares(&self) -> Vec<Vec<Rational>> {
        self.seats
            .iter()
            .map(|row| row.iter().map(|&s| Rational::new(s.into(), self.k.into())).collect())
            .collect()
    }

    fn matches(&self, schema_like: &TargetDistribution) -> bool {
        self.seats.len() == schema_like.len()
            && self
                .seats
                .iter()
                .zip(schema_like.shares())
                .all(|(a, b)| a.len() == b.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossKind {
    /// `Σ_{i,j} |r_i^j − π_i^j|`
    L1,
    /// `Σ_i max_j |r_i^j − π_i^j|`
    L1Max,
    /// `max_{i,j} |r_i^j − π_i^j|`
    LMax,
}

impl LossKind {
    pub const ALL: [LossKind; 3] = [LossKind::L1, LossKind::L1Max, LossKind::LMax];

    pub fn as_str(self) -> &'static str {
        match self {
            LossKind::L1 => "l1",
            LossKind::L1Max => "l1max",
            LossKind::LMax => "lmax",
        }
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(LossKind::L1),
            "l1max" => Ok(LossKind::L1Max),
            "lmax" => Ok(LossKind::LMax),
            other => Err(Error::UnsupportedParameter(format!("unknown loss `{other}`"))),
        }
    }
}

/// One voter's preferred value index per attribute.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ballot {
    values: Vec<usize>,
}

impl Ballot {
    pub fn new(values: Vec<usize>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// Database, target distribution and committee size: what every solver
/// consumes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    db: CandidateDatabase,
    target: TargetDistribution,
    k: usize,
}

impl Instance {
    pub fn new(db: CandidateDatabase, target: TargetDistribution, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("committee size k must be at least 1".into()));
        }
        if !target.matches(db.schema()) {
            return Err(Error::SchemaViolation("target does not match the schema".into()));
        }
        Ok(Self { db, target, k })
    }

    pub fn db(&self) -> &CandidateDatabase {
        &self.db
    }

    pub fn schema(&self) -> &AttributeSchema {
        self.db.schema()
    }

    pub fn target(&self) -> &TargetDistribution {
        &self.target
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn with_target(&self, target: TargetDistribution) -> Result<Self> {
        Self::new(self.db.clone(), target, self.k)
    }

    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(self.db.clone(), self.target.clone(), k)
    }

    pub(crate) fn require_committees(&self) -> Result<()> {
        if self.k > self.db.len() {
            Err(Error::NoCommittee {
                k: self.k,
                m: self.db.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn representation(&self, committee: &Committee) -> Result<RepresentationVector> {
        representation_vector(&self.db, committee)
    }

    pub fn loss_of(&self, kind: LossKind, committee: &Committee) -> Result<Rational> {
        loss(kind, &self.target, &self.representation(committee)?)
    }
}

/// `r_i^j(A) = |{c ∈ A : X_i(c) = x_i^j}| / k`.
pub fn representation_vector(db: &CandidateDatabase, committee: &Committee) -> Result<RepresentationVector> {
    committee.validate(db)?;
    if committee.is_empty() {
        return Err(Error::EmptyInput("committee"));
    }
    let counts = db.tally(committee.members());
    Ok(RepresentationVector::from_flat(db.schema(), committee.len(), &counts))
}

/// Distance between two share tables of identical shape.
pub fn distance(kind: LossKind, left: &[Vec<Rational>], right: &[Vec<Rational>]) -> Result<Rational> {
    if left.len() != right.len() || left.iter().zip(right).any(|(a, b)| a.len() != b.len()) {
        return Err(Error::SchemaViolation("distributions have different shapes".into()));
    }
    let per_attribute = left
        .iter()
        .zip(right)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()));
    let total = match kind {
        LossKind::L1 => per_attribute.flatten().fold(Rational::zero(), |acc, d| acc + d),
        LossKind::L1Max => per_attribute
            .map(|row| row.fold(Rational::zero(), |m, d| if d > m { d } else { m }))
            .fold(Rational::zero(), |acc, d| acc + d),
        LossKind::LMax => per_attribute
            .flatten()
            .fold(Rational::zero(), |m, d| if d > m { d } else { m }),
    };
    Ok(total)
}

/// Exact loss of representation `r` against target `π`.
pub fn loss(kind: LossKind, target: &TargetDistribution, r: &RepresentationVector) -> Result<Rational> {
    if !r.matches(target) {
        return Err(Error::SchemaViolation(
            "representation does not match the target schema".into(),
        ));
    }
    distance(kind, target.shares(), &r.shares())
}

/// A committee is perfect when its representation equals `π` exactly.
pub fn is_perfect(db: &CandidateDatabase, committee: &Committee, target: &TargetDistribution) -> Result<bool> {
    let r = representation_vector(db, committee)?;
    if !r.matches(target) {
        return Err(Error::SchemaViolation("target does not match the schema".into()));
    }
    Ok(r.shares() == target.shares())
}

/// True iff `k · π_i^j` is an integer everywhere.
pub fn is_natural(target: &TargetDistribution, k: usize) -> bool {
    let k = rational::from_usize(k);
    target
        .shares()
        .iter()
        .flatten()
        .all(|x| rational::is_integer(&(x * &k)))
}

/// Targets as observed ballot frequencies.
pub fn targets_from_ballots(schema: &AttributeSchema, ballots: &[Ballot]) -> Result<TargetDistribution> {
    if ballots.is_empty() {
        return Err(Error::EmptyInput("ballot list"));
    }
    let mut counts: Vec<Vec<usize>> = schema.attributes().iter().map(|a| vec![0; a.domain_size()]).collect();
    for (b, ballot) in ballots.iter().enumerate() {
        if ballot.values.len() != schema.len() {
            return Err(Error::SchemaViolation(format!(
                "ballot {b} has {} entries, schema has {} attributes",
                ballot.values.len(),
                schema.len()
            )));
        }
        for (i, &v) in ballot.values.iter().enumerate() {
            if v >= schema.domain_size(i) {
                return Err(Error::SchemaViolation(format!(
                    "ballot {b}: value index {v} out of range for attribute `{}`",
                    schema.attribute(i).name()
                )));
            }
            counts[i][v] += 1;
        }
    }
    let n = ballots.len();
    let shares = counts
        .into_iter()
        .map(|row| row.into_iter().map(|c| Rational::new(c.into(), n.into())).collect())
        .collect();
    TargetDistribution::new(schema, shares)
}

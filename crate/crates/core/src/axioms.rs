//! Apportionment properties lifted to several attributes: non-reversal,
//! respect of quota, population monotonicity and house monotonicity.
//!
//! The probes quantify over every optimal committee. Representation
//! depends only on how many members come from each bucket of identical
//! candidates, so optima are enumerated as bucket allocations.

use num_traits::Zero;

use crate::apportionment::{largest_remainder, QuotaKind, SeatAllocation};
use crate::error::{Error, Result};
use crate::model::{Committee, Instance, LossKind, RepresentationVector, TargetDistribution};
use crate::rational::{self, Rational};
use crate::solvers::{optimal_allocations, BucketTable, SolverConfig};

/// `π_i^higher > π_i^lower` yet `r_i^higher < r_i^lower`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NonReversalViolation {
    pub attribute: usize,
    pub higher: usize,
    pub lower: usize,
}

/// Seat count outside `{⌊kπ_i^j⌋, ⌈kπ_i^j⌉}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotaViolation {
    pub attribute: usize,
    pub value: usize,
    pub seats: usize,
    pub floor: usize,
    pub ceil: usize,
}

fn same_shape(r: &RepresentationVector, target: &TargetDistribution) -> Result<()> {
    let ok = r.seat_rows().len() == target.len()
        && r.seat_rows()
            .iter()
            .zip(target.shares())
            .all(|(a, b)| a.len() == b.len());
    if ok {
        Ok(())
    } else {
        Err(Error::SchemaViolation(
            "representation does not match the target schema".into(),
        ))
    }
}

pub fn check_non_reversal(r: &RepresentationVector, target: &TargetDistribution) -> Result<Vec<NonReversalViolation>> {
    same_shape(r, target)?;
    let mut out = Vec::new();
    for (i, (seats, shares)) in r.seat_rows().iter().zip(target.shares()).enumerate() {
        for higher in 0..shares.len() {
            for lower in 0..shares.len() {
                if shares[higher] > shares[lower] && seats[higher] < seats[lower] {
                    out.push(NonReversalViolation {
                        attribute: i,
                        higher,
                        lower,
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn check_quota(r: &RepresentationVector, target: &TargetDistribution, k: usize) -> Result<Vec<QuotaViolation>> {
    same_shape(r, target)?;
    if r.k() != k {
        return Err(Error::Domain(format!("representation is for k = {}, not {k}", r.k())));
    }
    let kr = rational::from_usize(k);
    let mut out = Vec::new();
    for (i, (seats, shares)) in r.seat_rows().iter().zip(target.shares()).enumerate() {
        for (j, (&s, pi)) in seats.iter().zip(shares).enumerate() {
            let ideal = pi * &kr;
            let floor = usize::try_from(ideal.floor().to_integer()).expect("bounded by k");
            let ceil = usize::try_from(ideal.ceil().to_integer()).expect("bounded by k");
            if s != floor && s != ceil {
                out.push(QuotaViolation {
                    attribute: i,
                    value: j,
                    seats: s,
                    floor,
                    ceil,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeOutcome<W> {
    Holds,
    Violated(W),
}

impl<W> ProbeOutcome<W> {
    pub fn holds(&self) -> bool {
        matches!(self, ProbeOutcome::Holds)
    }
}

/// An optimum for `π` with fewer seats on the probed value than every
/// optimum for `ρ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopulationWitness {
    pub committee: Committee,
    pub seats: usize,
    /// Fewest seats on the probed value over all optima for `ρ`.
    pub min_seats_rho: usize,
    pub loss_pi: Rational,
    pub loss_rho: Rational,
}

/// `ρ` from `π` by lowering `π_i^j` to `new_share` and rescaling the other
/// values of attribute `i` so that their ratios are kept.
pub fn shrink_share(
    pi: &TargetDistribution,
    attribute: usize,
    value: usize,
    new_share: &Rational,
) -> Result<TargetDistribution> {
    let row = pi
        .shares()
        .get(attribute)
        .ok_or_else(|| Error::SchemaViolation(format!("no attribute {attribute}")))?;
    let old = row
        .get(value)
        .ok_or_else(|| Error::SchemaViolation(format!("no value {value} in attribute {attribute}")))?;
    let one = rational::from_usize(1);
    if *new_share < Rational::zero() || new_share >= old {
        return Err(Error::Domain(format!("new share {new_share} must lie in [0, {old})")));
    }
    let rest = &one - old;
    let mut shares = pi.shares().to_vec();
    shares[attribute] = row
        .iter()
        .enumerate()
        .map(|(j, x)| {
            if j == value {
                new_share.clone()
            } else if rest.is_zero() {
                (&one - new_share) / rational::from_usize(row.len() - 1)
            } else {
                x * (&one - new_share) / &rest
            }
        })
        .collect();
    Ok(TargetDistribution::from_validated(shares))
}

fn validate_population_pair(
    instance: &Instance,
    pi: &TargetDistribution,
    rho: &TargetDistribution,
    attribute: usize,
    value: usize,
) -> Result<()> {
    let shape = |t: &TargetDistribution| {
        t.len() == instance.schema().len()
            && t.shares()
                .iter()
                .enumerate()
                .all(|(i, row)| row.len() == instance.schema().domain_size(i))
    };
    if !shape(pi) || !shape(rho) {
        return Err(Error::SchemaViolation(
            "targets do not match the instance schema".into(),
        ));
    }
    if attribute >= pi.len() || value >= pi.attribute(attribute).len() {
        return Err(Error::SchemaViolation(format!(
            "no value ({attribute}, {value}) in the schema"
        )));
    }
    let (p, r) = (pi.attribute(attribute), rho.attribute(attribute));
    if p[value] <= r[value] {
        return Err(Error::Precondition(format!(
            "condition (a) fails: π share {} is not above ρ share {}",
            p[value], r[value]
        )));
    }
    for a in (0..p.len()).filter(|&a| a != value) {
        for b in (0..p.len()).filter(|&b| b != value && b != a) {
            if &p[a] * &r[b] != &p[b] * &r[a] {
                return Err(Error::Precondition(format!(
                    "condition (b) fails: ratio of values {a} and {b} changes"
                )));
            }
        }
    }
    for i in (0..pi.len()).filter(|&i| i != attribute) {
        if pi.attribute(i) != rho.attribute(i) {
            return Err(Error::Precondition(format!(
                "condition (c) fails: attribute {i} differs between the targets"
            )));
        }
    }
    Ok(())
}

fn seats_on(table: &BucketTable, allocation: &[usize], attribute: usize, value: usize) -> usize {
    allocation
        .iter()
        .enumerate()
        .filter(|&(b, _)| table.vector(b)[attribute] == value)
        .map(|(_, &n)| n)
        .sum()
}

/// Lowering `π_i^j` to `ρ_i^j` (other ratios in attribute `i` and other
/// attributes unchanged) must not give value `j` more seats: for every
/// optimum `A` for `π` some optimum `B` for `ρ` has `R_i^j(A) ≥ R_i^j(B)`.
pub fn population_monotonicity_probe(
    instance: &Instance,
    pi: &TargetDistribution,
    rho: &TargetDistribution,
    attribute: usize,
    value: usize,
    kind: LossKind,
    config: &SolverConfig,
) -> Result<ProbeOutcome<PopulationWitness>> {
    validate_population_pair(instance, pi, rho, attribute, value)?;
    let (loss_pi, table, under_pi) = optimal_allocations(&instance.with_target(pi.clone())?, kind, config)?;
    let (loss_rho, _, under_rho) = optimal_allocations(&instance.with_target(rho.clone())?, kind, config)?;
    let min_rho = under_rho
        .iter()
        .map(|a| seats_on(&table, a, attribute, value))
        .min()
        .expect("at least one optimum");
    let worst = under_pi
        .iter()
        .min_by_key(|a| seats_on(&table, a, attribute, value))
        .expect("at least one optimum");
    let seats = seats_on(&table, worst, attribute, value);
    if seats >= min_rho {
        return Ok(ProbeOutcome::Holds);
    }
    Ok(ProbeOutcome::Violated(PopulationWitness {
        committee: table.committee(worst)?,
        seats,
        min_seats_rho: min_rho,
        loss_pi,
        loss_rho,
    }))
}

/// How committees of different sizes are compared.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum HouseReading {
    /// Seat counts `R_i^j`.
    #[default]
    Seats,
    /// Shares `r_i^j = R_i^j / k`.
    Fractions,
}

/// An optimum at `k` that no optimum at `k'` dominates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HouseWitness {
    pub committee: Committee,
    pub seats: Vec<Vec<usize>>,
    pub k: usize,
    pub k_larger: usize,
}

/// For every optimum `A` at size `k` some optimum `B` at size `k'`
/// satisfies `R_i^j(B) ≥ R_i^j(A)` everywhere (or the same on shares).
pub fn house_monotonicity_probe(
    instance: &Instance,
    k: usize,
    k_larger: usize,
    kind: LossKind,
    reading: HouseReading,
    config: &SolverConfig,
) -> Result<ProbeOutcome<HouseWitness>> {
    if k_larger <= k {
        return Err(Error::Precondition(format!("k' = {k_larger} must exceed k = {k}")));
    }
    if k_larger > instance.db().len() {
        return Err(Error::NoCommittee {
            k: k_larger,
            m: instance.db().len(),
        });
    }
    let small = instance.with_k(k)?;
    let large = instance.with_k(k_larger)?;
    let (_, table, at_k) = optimal_allocations(&small, kind, config)?;
    let (_, _, at_larger) = optimal_allocations(&large, kind, config)?;
    let seats = |alloc: &[usize]| -> Result<Vec<Vec<usize>>> {
        let committee = table.committee(alloc)?;
        Ok(instance.representation(&committee)?.seat_rows().to_vec())
    };
    let larger_seats = at_larger.iter().map(|a| seats(a)).collect::<Result<Vec<_>>>()?;
    let dominated = |a: &[Vec<usize>], b: &[Vec<usize>]| -> bool {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .all(|(&x, &y)| match reading {
                HouseReading::Seats => y >= x,
                HouseReading::Fractions => y * k >= x * k_larger,
            })
    };
    for alloc in &at_k {
        let a = seats(alloc)?;
        if !larger_seats.iter().any(|b| dominated(&a, b)) {
            return Ok(ProbeOutcome::Violated(HouseWitness {
                committee: table.committee(alloc)?,
                seats: a,
                k,
                k_larger,
            }));
        }
    }
    Ok(ProbeOutcome::Holds)
}

/// A vote vector whose Hamilton outcome loses a seat when the house grows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlabamaParadox {
    pub votes: Vec<u64>,
    pub k: usize,
    pub seats_before: Vec<usize>,
    pub seats_after: Vec<usize>,
    pub instance: Instance,
}

fn party_instance(votes: &[u64], k: usize, supply: usize) -> Result<Instance> {
    use crate::model::{Attribute, AttributeSchema, Candidate, CandidateDatabase};
    let labels: Vec<String> = (1..=votes.len()).map(|p| format!("P{p}")).collect();
    let schema = AttributeSchema::new(vec![Attribute::new("party", labels.clone())])?;
    let mut candidates = Vec::new();
    for (p, label) in labels.iter().enumerate() {
        for copy in 1..=supply {
            candidates.push(Candidate::new(format!("{label}#{copy}"), vec![p]));
        }
    }
    let total: u64 = votes.iter().sum();
    let shares = vec![votes.iter().map(|&v| Rational::new(v.into(), total.into())).collect()];
    let target = TargetDistribution::new(&schema, shares)?;
    Instance::new(CandidateDatabase::new(schema, candidates)?, target, k)
}

/// Searches vote vectors (non-decreasing, entries `1..=max_votes`, `2..=
/// max_parties` parties) and house sizes `k < max_k` for a pair `(k, k+1)`
/// where the house monotonicity probe fails on a single-attribute
/// instance with `k + 1` candidates per party. Returns the first hit in
/// enumeration order.
pub fn find_alabama_paradox(
    max_parties: usize,
    max_k: usize,
    max_votes: u64,
    config: &SolverConfig,
) -> Result<Option<AlabamaParadox>> {
    for parties in 2..=max_parties {
        let mut votes = vec![1u64; parties];
        loop {
            let weights: Vec<Rational> = votes.iter().map(|&v| Rational::from_integer(v.into())).collect();
            for k in 1..max_k {
                let before = largest_remainder(&weights, k, QuotaKind::Hare)?;
                let after = largest_remainder(&weights, k + 1, QuotaKind::Hare)?;
                let covered = |a: &SeatAllocation| {
                    after
                        .all_tied
                        .iter()
                        .any(|b| a.seats().iter().zip(b.seats()).all(|(x, y)| y >= x))
                };
                if before.all_tied.iter().all(covered) {
                    continue;
                }
                let instance = party_instance(&votes, k, k + 1)?;
                let probe = house_monotonicity_probe(&instance, k, k + 1, LossKind::L1, HouseReading::Seats, config)?;
                if let ProbeOutcome::Violated(_) = probe {
                    return Ok(Some(AlabamaParadox {
                        votes: votes.clone(),
                        k,
                        seats_before: before.canonical.seats().to_vec(),
                        seats_after: after.canonical.seats().to_vec(),
                        instance,
                    }));
                }
            }
            // next non-decreasing vector
            let Some(pos) = (0..parties).rev().find(|&p| votes[p] < max_votes) else {
                break;
            };
            let v = votes[pos] + 1;
            for slot in &mut votes[pos..] {
                *slot = v;
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::catalog;
    use crate::model::representation_vector;
    use crate::rational::ratio;
    use crate::solvers::brute_force;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn quota_counterexample() {
        let inst = catalog::get("quota-cx").unwrap().instance;
        let optima = brute_force(&inst, LossKind::L1, true, &cfg()).unwrap();
        assert_eq!(optima.committees.len(), 2);
        for c in &optima.committees {
            let r = representation_vector(inst.db(), c).unwrap();
            assert!(!check_quota(&r, inst.target(), 1).unwrap().is_empty());
        }
    }

    #[test]
    fn nonreversal_counterexample() {
        let inst = catalog::get("nonreversal-cx").unwrap().instance;
        for kind in LossKind::ALL {
            let optima = brute_force(&inst, kind, true, &cfg()).unwrap();
            for c in &optima.committees {
                let r = representation_vector(inst.db(), c).unwrap();
                let v = check_non_reversal(&r, inst.target()).unwrap();
                assert!(v.contains(&NonReversalViolation {
                    attribute: 0,
                    higher: 1,
                    lower: 0
                }));
            }
        }
        let opt = brute_force(&inst, LossKind::L1, false, &cfg()).unwrap();
        assert_eq!(opt.loss, ratio(13, 10));
    }

    #[test]
    fn exact_match_has_no_violations() {
        let inst = catalog::get("ilp-feasible").unwrap().instance;
        let c = Committee::new([0, 4, 5, 8, 9]).unwrap();
        let r = representation_vector(inst.db(), &c).unwrap();
        assert!(check_non_reversal(&r, inst.target()).unwrap().is_empty());
        assert!(check_quota(&r, inst.target(), 5).unwrap().is_empty());
    }

    #[test]
    fn shrink_share_keeps_ratios() {
        let inst = catalog::intro();
        let rho = shrink_share(inst.target(), 1, 0, &ratio(1, 4)).unwrap();
        assert_eq!(rho.attribute(1), &[ratio(1, 4), ratio(5, 12), ratio(1, 3)]);
        assert_eq!(rho.attribute(0), inst.target().attribute(0));
        assert!(shrink_share(inst.target(), 1, 0, &ratio(3, 5)).is_err());
    }

    #[test]
    fn population_probe_preconditions() {
        let inst = catalog::intro();
        let same = population_monotonicity_probe(&inst, inst.target(), inst.target(), 0, 0, LossKind::L1, &cfg());
        assert!(matches!(same, Err(Error::Precondition(_))));
        let rho = shrink_share(inst.target(), 1, 0, &ratio(1, 4)).unwrap();
        let mut bent = rho.shares().to_vec();
        bent[1] = vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)];
        let bent = TargetDistribution::new(inst.schema(), bent).unwrap();
        let r = population_monotonicity_probe(&inst, inst.target(), &bent, 1, 0, LossKind::L1, &cfg());
        assert!(matches!(r, Err(Error::Precondition(_))));
        let mut other = rho.shares().to_vec();
        other[0] = vec![ratio(1, 4), ratio(3, 4)];
        let other = TargetDistribution::new(inst.schema(), other).unwrap();
        let r = population_monotonicity_probe(&inst, inst.target(), &other, 1, 0, LossKind::L1, &cfg());
        assert!(matches!(r, Err(Error::Precondition(_))));
        let ok = population_monotonicity_probe(&inst, inst.target(), &rho, 1, 0, LossKind::L1, &cfg());
        assert!(ok.is_ok());
    }

    #[test]
    fn full_share_can_be_lowered() {
        let inst = catalog::get("differ-4").unwrap().instance;
        let rho = shrink_share(inst.target(), 0, 0, &ratio(1, 3)).unwrap();
        assert_eq!(rho.attribute(0), &[ratio(1, 3), ratio(2, 3)]);
        for kind in LossKind::ALL {
            let out = population_monotonicity_probe(&inst, inst.target(), &rho, 0, 0, kind, &cfg()).unwrap();
            assert!(out.holds(), "{kind}");
        }
    }

    #[test]
    fn population_counterexample_is_violated() {
        let entry = catalog::get("popmono-cx").unwrap();
        let inst = &entry.instance;
        let alt = entry.alternate_target.unwrap();
        let out = population_monotonicity_probe(inst, &alt, inst.target(), 0, 0, LossKind::L1, &cfg()).unwrap();
        let ProbeOutcome::Violated(w) = out else {
            panic!("expected a violation");
        };
        assert_eq!(w.seats, 2);
        assert_eq!(w.min_seats_rho, 4);
        assert_eq!(w.loss_rho, ratio(9, 8));
        assert_eq!(w.loss_pi, ratio(3, 4));
        assert_eq!(
            w.committee.names(inst.db()),
            (1..=8).map(|i| format!("B{i}")).collect::<Vec<_>>()
        );
    }

    #[test]
    fn alabama_catalog_entry() {
        let inst = catalog::get("alabama").unwrap().instance;
        let out = house_monotonicity_probe(&inst, 3, 4, LossKind::L1, HouseReading::Seats, &cfg()).unwrap();
        let ProbeOutcome::Violated(w) = out else {
            panic!("expected the paradox");
        };
        assert_eq!(w.seats, vec![vec![1, 1, 1]]);
    }

    #[test]
    fn alabama_search_finds_a_paradox() {
        let hit = find_alabama_paradox(4, 12, 6, &cfg())
            .unwrap()
            .expect("a paradox exists");
        assert!(hit.seats_after.iter().zip(&hit.seats_before).any(|(a, b)| a < b));
    }

    #[test]
    fn house_probe_edges() {
        let inst = catalog::intro();
        assert!(matches!(
            house_monotonicity_probe(&inst, 4, 4, LossKind::L1, HouseReading::Seats, &cfg()),
            Err(Error::Precondition(_))
        ));
        let full = house_monotonicity_probe(&inst, 4, 10, LossKind::L1, HouseReading::Seats, &cfg()).unwrap();
        assert!(full.holds());
    }
}

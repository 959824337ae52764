//! Largest-remainder apportionment (Hamilton and the other classical
//! quotas), target naturalization and the single-attribute committee.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics;
use crate::error::{Error, Result};
use crate::model::{CandidateDatabase, Committee, TargetDistribution};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuotaKind {
    /// `n / k` (Hamilton method).
    Hare,
    /// `1 + n / (1 + k)`.
    Droop,
    /// `n / (1 + k)`.
    #[serde(rename = "hb")]
    HagenbachBischoff,
    /// `n / (2 + k)`.
    Imperiali,
}

impl QuotaKind {
    /// Quota for `n` total votes and `k` seats.
    pub fn quota(self, n: &Rational, k: usize) -> Rational {
        let k = rational::from_usize(k);
        let one = rational::from_usize(1);
        match self {
            QuotaKind::Hare => n / k,
            QuotaKind::Droop => one.clone() + n / (k + one),
            QuotaKind::HagenbachBischoff => n / (k + one),
            QuotaKind::Imperiali => n / (k + rational::from_usize(2)),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QuotaKind::Hare => "hare",
            QuotaKind::Droop => "droop",
            QuotaKind::HagenbachBischoff => "hb",
            QuotaKind::Imperiali => "imperiali",
        }
    }
}

impl fmt::Display for QuotaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QuotaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hare" | "hamilton" => Ok(QuotaKind::Hare),
            "droop" => Ok(QuotaKind::Droop),
            "hb" | "hagenbach-bischoff" => Ok(QuotaKind::HagenbachBischoff),
            "imperiali" => Ok(QuotaKind::Imperiali),
            other => Err(Error::UnsupportedParameter(format!("unknown quota `{other}`"))),
        }
    }
}

/// Integer seats per value of one attribute; entries sum to `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeatAllocation(Vec<usize>);

impl SeatAllocation {
    pub fn new(seats: Vec<usize>) -> Self {
        Self(seats)
    }

    pub fn seats(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Shares `seats / k`; `k` must be positive.
    pub fn shares(&self) -> Vec<Rational> {
        let k = self.total();
        self.0.iter().map(|&s| Rational::new(s.into(), k.into())).collect()
    }
}

/// Outcome of a largest-remainder run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Apportionment {
    /// Ties broken towards the lower value index.
    pub canonical: SeatAllocation,
    /// Every allocation reachable under some breaking of remainder ties,
    /// sorted.
    pub all_tied: Vec<SeatAllocation>,
    /// Ideal seats `s_i*`.
    pub ideal: Vec<Rational>,
}

pub fn largest_remainder(weights: &[Rational], k: usize, quota: QuotaKind) -> Result<Apportionment> {
    if weights.is_empty() {
        return Err(Error::EmptyInput("weights"));
    }
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Err(Error::Domain(format!("negative weight {w}")));
    }
    let total: Rational = weights.iter().sum();
    if total.is_zero() {
        return Err(Error::Domain("weights are all zero".into()));
    }
    let ideal: Vec<Rational> = match quota {
        // s* = k · fraction; exact and scale-invariant
        QuotaKind::Hare => {
            let k = rational::from_usize(k);
            weights.iter().map(|w| &k * w / &total).collect()
        }
        _ => {
            let q = quota.quota(&total, k);
            weights.iter().map(|w| w / &q).collect()
        }
    };
    let floors: Vec<usize> = ideal
        .iter()
        .map(|s| {
            use num_traits::ToPrimitive;
            s.floor().to_integer().to_usize().unwrap_or(usize::MAX)
        })
        .collect();
    let assigned = floors
        .iter()
        .try_fold(0usize, |acc, &f| acc.checked_add(f))
        .unwrap_or(usize::MAX);
    if assigned > k {
        return Err(Error::OverAllocation {
            floors: assigned as u64,
            seats: k as u64,
        });
    }
    let remaining = k - assigned;
    if remaining > weights.len() {
        return Err(Error::Unallocatable {
            remaining: remaining as u64,
            parties: weights.len(),
        });
    }
    let remainders: Vec<Rational> = ideal.iter().map(|s| s - s.floor()).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| remainders[b].cmp(&remainders[a]).then(a.cmp(&b)));

    let (definite, tied, need) = if remaining == 0 {
        (Vec::new(), Vec::new(), 0)
    } else {
        let threshold = &remainders[order[remaining - 1]];
        let definite: Vec<usize> = order.iter().copied().filter(|&i| &remainders[i] > threshold).collect();
        let mut tied: Vec<usize> = order.iter().copied().filter(|&i| &remainders[i] == threshold).collect();
        tied.sort_unstable();
        let need = remaining - definite.len();
        (definite, tied, need)
    };

    let build = |extra: &[usize]| {
        let mut seats = floors.clone();
        for &i in definite.iter().chain(extra) {
            seats[i] += 1;
        }
        SeatAllocation(seats)
    };
    let canonical = build(&tied[..need]);
    let mut all_tied: Vec<SeatAllocation> = combinatorics::subsets(&tied, need)
        .iter()
        .map(|extra| build(extra))
        .collect();
    all_tied.sort();
    Ok(Apportionment {
        canonical,
        all_tied,
        ideal,
    })
}

/// Rounds every `π_i` to the Hamilton allocation over `k`, giving a natural
/// target. Each attribute moves by less than `q_i/k` in L1, and by at most
/// `1/k` when it is binary, so binary instances stay within `2|X|/k`.
pub fn naturalize(target: &TargetDistribution, k: usize) -> Result<TargetDistribution> {
    if k == 0 {
        return Err(Error::Domain("committee size k must be at least 1".into()));
    }
    let shares = target
        .shares()
        .iter()
        .map(|row| largest_remainder(row, k, QuotaKind::Hare).map(|a| a.canonical.shares()))
        .collect::<Result<Vec<_>>>()?;
    Ok(TargetDistribution::from_validated(shares))
}

/// Committee for a one-attribute database whose seat counts are the
/// canonical Hamilton allocation; lowest candidate indices are taken
/// within each value.
pub fn hamilton_committee_single_attribute(
    db: &CandidateDatabase,
    target: &TargetDistribution,
    k: usize,
) -> Result<Committee> {
    if db.schema().len() != 1 {
        return Err(Error::Precondition(format!(
            "single-attribute solver needs p = 1, database has p = {}",
            db.schema().len()
        )));
    }
    if target.len() != 1 || target.attribute(0).len() != db.schema().domain_size(0) {
        return Err(Error::SchemaViolation("target does not match the schema".into()));
    }
    let seats = largest_remainder(target.attribute(0), k, QuotaKind::Hare)?.canonical;
    let mut members = Vec::with_capacity(k);
    for (value, &need) in seats.seats().iter().enumerate() {
        let pool: Vec<usize> = (0..db.len())
            .filter(|&c| db.candidate(c).values()[0] == value)
            .collect();
        if pool.len() < need {
            return Err(Error::Supply {
                value: db.schema().attribute(0).values()[value].clone(),
                needed: need,
                available: pool.len(),
            });
        }
        members.extend_from_slice(&pool[..need]);
    }
    Committee::new(members)
}

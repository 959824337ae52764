//! Integer-scaled loss evaluation on flat seat tallies.
//!
//! With `L` the lcm of all target denominators, every term
//! `|c/k − π|` equals `|c·L − k·L·π| / (k·L)` and the numerator is an
//! integer. Solvers compare these numerators; the exact rational is rebuilt
//! only for reporting. Small instances use `i128`, anything that could
//! overflow falls back to `BigInt`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::model::{AttributeSchema, Instance, LossKind, TargetDistribution};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Score {
    Small(i128),
    Big(BigInt),
}

impl Score {
    fn add(self, other: Score) -> Score {
        match (self, other) {
            (Score::Small(a), Score::Small(b)) => Score::Small(a + b),
            (Score::Big(a), Score::Big(b)) => Score::Big(a + b),
            _ => unreachable!("scores from different evaluators"),
        }
    }

    fn max(self, other: Score) -> Score {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Score::Small(a), Score::Small(b)) => a.cmp(b),
            (Score::Big(a), Score::Big(b)) => a.cmp(b),
            _ => unreachable!("scores from different evaluators"),
        }
    }
}

#[derive(Debug, Clone)]
enum Scaled {
    Small { unit: i128, targets: Vec<i128> },
    Big { unit: BigInt, targets: Vec<BigInt> },
}

#[derive(Debug, Clone)]
pub(crate) struct LossEvaluator {
    kind: LossKind,
    offsets: Vec<usize>,
    denominator: BigInt,
    scaled: Scaled,
}

impl LossEvaluator {
    pub(crate) fn new(instance: &Instance, kind: LossKind) -> Self {
        Self::for_target(instance.schema(), instance.target(), instance.k(), kind)
    }

    pub(crate) fn for_target(schema: &AttributeSchema, target: &TargetDistribution, k: usize, kind: LossKind) -> Self {
        let unit = rational::lcm_denominators(target.shares().iter().flatten());
        let denominator = &unit * BigInt::from(k);
        let den_r = Rational::from_integer(denominator.clone());
        let targets: Vec<BigInt> = target
            .shares()
            .iter()
            .flatten()
            .map(|x| (x * &den_r).to_integer())
            .collect();
        // every term is at most k·L; sums over all values must stay far from i128::MAX
        let headroom = &denominator * BigInt::from(schema.flat_len() + 1);
        let scaled = if headroom.bits() < 100 {
            Scaled::Small {
                unit: unit.to_i128().expect("checked width"),
                targets: targets.iter().map(|t| t.to_i128().expect("checked width")).collect(),
            }
        } else {
            Scaled::Big { unit, targets }
        };
        Self {
            kind,
            offsets: schema.offsets().to_vec(),
            denominator,
            scaled,
        }
    }

    pub(crate) fn attribute_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub(crate) fn attribute_range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub(crate) fn zero(&self) -> Score {
        match self.scaled {
            Scaled::Small { .. } => Score::Small(0),
            Scaled::Big { .. } => Score::Big(BigInt::zero()),
        }
    }

    /// Scaled `|count/k − π|` for flat value index `flat`.
    pub(crate) fn value_term(&self, flat: usize, count: u32) -> Score {
        match &self.scaled {
            Scaled::Small { unit, targets } => Score::Small((unit * count as i128 - targets[flat]).abs()),
            Scaled::Big { unit, targets } => Score::Big((unit * BigInt::from(count) - &targets[flat]).abs()),
        }
    }

    /// Aggregates value terms within one attribute.
    pub(crate) fn within(&self, acc: Score, term: Score) -> Score {
        match self.kind {
            LossKind::L1 => acc.add(term),
            LossKind::L1Max | LossKind::LMax => acc.max(term),
        }
    }

    /// Aggregates attribute terms into the loss.
    pub(crate) fn across(&self, acc: Score, term: Score) -> Score {
        match self.kind {
            LossKind::L1 | LossKind::L1Max => acc.add(term),
            LossKind::LMax => acc.max(term),
        }
    }

    pub(crate) fn attribute_term(&self, i: usize, counts: &[u32]) -> Score {
        self.attribute_range(i)
            .fold(self.zero(), |acc, f| self.within(acc, self.value_term(f, counts[f])))
    }

    pub(crate) fn score(&self, counts: &[u32]) -> Score {
        (0..self.attribute_count()).fold(self.zero(), |acc, i| self.across(acc, self.attribute_term(i, counts)))
    }

    pub(crate) fn to_rational(&self, score: &Score) -> Rational {
        let num = match score {
            Score::Small(v) => BigInt::from(*v),
            Score::Big(v) => v.clone(),
        };
        Rational::new(num, self.denominator.clone())
    }
}

mod common;

use common::{oracle_loss, oracle_optima};
use mapr::apportionment::{hamilton_committee_single_attribute, largest_remainder, naturalize, QuotaKind};
use mapr::format::{parse_instance, to_json_string};
use mapr::generators::{random_instance, RandomOptions};
use mapr::rational::{self, ratio};
use mapr::solvers::{
    brute_force, local_search, sample_committee, solve_buckets_optimal, LocalSearchParams, SolverConfig,
};
use mapr::transform::verify_transform_identities;
use mapr::{
    distance, is_natural, targets_from_ballots, Attribute, AttributeSchema, Ballot, Execution, Instance, LossKind,
    Rational,
};
use proptest::prelude::*;

fn instance(domains: &[usize], m: usize, k: usize, seed: u64) -> Instance {
    random_instance(domains, m, k, seed, RandomOptions::default()).unwrap()
}

prop_compose! {
    fn small_instance(max_p: usize, max_q: usize, max_m: usize)
        (domains in prop::collection::vec(2..=max_q, 1..=max_p), m in 1..=max_m, seed in any::<u64>())
        (k in 1..=m, domains in Just(domains), m in Just(m), seed in Just(seed))
        -> Instance {
        instance(&domains, m, k, seed)
    }
}

fn sequential() -> SolverConfig {
    SolverConfig::sequential()
}

fn parallel() -> SolverConfig {
    SolverConfig {
        execution: Execution::Parallel,
        ..SolverConfig::default()
    }
}

proptest! {
    #[test]
    fn loss_chain(inst in small_instance(4, 4, 10), seed in any::<u64>()) {
        let c = sample_committee(inst.db().len(), inst.k(), seed).unwrap();
        let [l1, l1max, lmax] = LossKind::ALL.map(|kd| inst.loss_of(kd, &c).unwrap());
        for (kd, got) in LossKind::ALL.iter().zip([&l1, &l1max, &lmax]) {
            prop_assert_eq!(got, &oracle_loss(&inst, *kd, c.members()));
        }
        let p = rational::from_usize(inst.schema().len());
        let q = rational::from_usize(inst.schema().max_domain_size());
        prop_assert!(lmax <= l1max && l1max <= l1);
        prop_assert!(l1 <= &q * &l1max);
        prop_assert!(l1max <= &p * &lmax);
    }

    #[test]
    fn binary_l1_is_twice_l1max(p in 1usize..6, m in 1usize..10, seed in any::<u64>()) {
        let k = (seed as usize % m) + 1;
        let inst = instance(&vec![2; p], m, k, seed);
        let c = sample_committee(m, k, seed ^ 1).unwrap();
        let l1 = inst.loss_of(LossKind::L1, &c).unwrap();
        let l1max = inst.loss_of(LossKind::L1Max, &c).unwrap();
        prop_assert_eq!(l1, l1max * ratio(2, 1));
    }

    #[test]
    fn one_attribute_l1max_is_lmax(q in 2usize..6, m in 1usize..10, seed in any::<u64>()) {
        let k = (seed as usize % m) + 1;
        let inst = instance(&[q], m, k, seed);
        let c = sample_committee(m, k, seed ^ 2).unwrap();
        prop_assert_eq!(inst.loss_of(LossKind::L1Max, &c).unwrap(), inst.loss_of(LossKind::LMax, &c).unwrap());
    }

    #[test]
    fn transform_identities_hold(inst in small_instance(3, 5, 8), seed in any::<u64>()) {
        let c = sample_committee(inst.db().len(), inst.k(), seed).unwrap();
        let ids = verify_transform_identities(&inst, &c).unwrap();
        prop_assert_eq!(ids.l1_ratio, ratio(2, 1));
        prop_assert!(ids.max_equal);
        prop_assert!(ids.l1max_ratio >= ratio(1, 1));
        prop_assert!(ids.l1max_ratio <= rational::from_usize(inst.schema().max_domain_size()));
    }

    #[test]
    fn hare_respects_quota_and_scale(
        votes in prop::collection::vec(0u32..100, 1..7),
        k in 1usize..20,
        scale in 1u32..50,
    ) {
        prop_assume!(votes.iter().any(|&v| v > 0));
        let weights: Vec<Rational> = votes.iter().map(|&v| ratio(v.into(), 1)).collect();
        let scaled: Vec<Rational> = votes.iter().map(|&v| ratio(i64::from(v) * i64::from(scale), 1)).collect();
        let a = largest_remainder(&weights, k, QuotaKind::Hare).unwrap();
        let b = largest_remainder(&scaled, k, QuotaKind::Hare).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.canonical.total(), k);
        prop_assert!(a.all_tied.contains(&a.canonical));
        for alloc in &a.all_tied {
            for (s, ideal) in alloc.seats().iter().zip(&a.ideal) {
                let s = rational::from_usize(*s);
                prop_assert!(s == ideal.floor() || s == ideal.ceil());
            }
        }
    }

    #[test]
    fn naturalize_is_natural_and_close(inst in small_instance(4, 5, 3), k in 1usize..12) {
        let nat = naturalize(inst.target(), k).unwrap();
        prop_assert!(is_natural(&nat, k));
        for i in 0..inst.schema().len() {
            let moved = distance(LossKind::L1, &inst.target().shares()[i..=i], &nat.shares()[i..=i]).unwrap();
            let q = inst.schema().domain_size(i);
            if q == 2 {
                prop_assert!(moved <= ratio(1, k as i64));
            } else {
                prop_assert!(moved < ratio(q as i64, k as i64));
            }
        }
    }

    #[test]
    fn hamilton_committee_is_optimal(q in 2usize..5, k in 1usize..5, seed in any::<u64>()) {
        let opts = RandomOptions { ensure_fs: true, ..RandomOptions::default() };
        let inst = random_instance(&[q], q * k, k, seed, opts).unwrap();
        let c = hamilton_committee_single_attribute(inst.db(), inst.target(), k).unwrap();
        for kind in LossKind::ALL {
            prop_assert_eq!(inst.loss_of(kind, &c).unwrap(), oracle_optima(&inst, kind).0);
        }
    }

    #[test]
    fn ballots_give_frequencies(rows in prop::collection::vec((0usize..3, 0usize..2), 1..30)) {
        let schema = AttributeSchema::new(vec![
            Attribute::new("a", ["x", "y", "z"]),
            Attribute::new("b", ["u", "v"]),
        ]).unwrap();
        let ballots: Vec<Ballot> = rows.iter().map(|&(a, b)| Ballot::new(vec![a, b])).collect();
        let pi = targets_from_ballots(&schema, &ballots).unwrap();
        let n = rows.len() as i64;
        for v in 0..3 {
            let count = rows.iter().filter(|r| r.0 == v).count() as i64;
            prop_assert_eq!(pi.share(0, v), &ratio(count, n));
        }
    }

    #[test]
    fn json_round_trip(inst in small_instance(3, 4, 8)) {
        let text = to_json_string(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(to_json_string(&back), text);
        prop_assert_eq!(back, inst);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn local_search_never_increases(inst in small_instance(4, 3, 10), seed in any::<u64>(), radius in 1usize..3) {
        for kind in LossKind::ALL {
            let rep = local_search(&inst, kind, &LocalSearchParams::new(radius, seed), &sequential()).unwrap();
            let start = sample_committee(inst.db().len(), inst.k(), seed).unwrap();
            let mut last = inst.loss_of(kind, &start).unwrap();
            for swap in &rep.trace.swaps {
                prop_assert!(swap.loss < last);
                last = swap.loss.clone();
            }
            prop_assert_eq!(&rep.loss, &last);
            prop_assert_eq!(&rep.loss, &oracle_loss(&inst, kind, rep.committee().members()));
            prop_assert!(rep.loss >= oracle_optima(&inst, kind).0);
        }
    }

    #[test]
    fn solvers_are_deterministic(inst in small_instance(3, 3, 9), seed in any::<u64>()) {
        for kind in LossKind::ALL {
            let params = LocalSearchParams::new(2, seed);
            let a = local_search(&inst, kind, &params, &sequential()).unwrap();
            prop_assert_eq!(&a, &local_search(&inst, kind, &params, &sequential()).unwrap());
            prop_assert_eq!(&a, &local_search(&inst, kind, &params, &parallel()).unwrap());
            let b = brute_force(&inst, kind, true, &sequential()).unwrap();
            prop_assert_eq!(&b, &brute_force(&inst, kind, true, &parallel()).unwrap());
            let c = solve_buckets_optimal(&inst, kind, &sequential()).unwrap();
            prop_assert_eq!(&c, &solve_buckets_optimal(&inst, kind, &parallel()).unwrap());
        }
    }

    #[test]
    fn exact_solvers_match_the_oracle(inst in small_instance(3, 3, 9)) {
        for kind in LossKind::ALL {
            let (opt, optima) = oracle_optima(&inst, kind);
            let brute = brute_force(&inst, kind, true, &SolverConfig::default()).unwrap();
            prop_assert_eq!(&brute.loss, &opt);
            let got: Vec<Vec<usize>> = brute.committees.iter().map(|c| c.members().to_vec()).collect();
            prop_assert_eq!(got, optima);
            prop_assert_eq!(solve_buckets_optimal(&inst, kind, &SolverConfig::default()).unwrap().loss, opt);
        }
    }
}

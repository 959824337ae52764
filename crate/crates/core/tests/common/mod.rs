#![allow(dead_code)]

use mapr::rational::{self, ratio};
use mapr::{Instance, LossKind, Rational};
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every `k`-subset of `0..m` in lexicographic order.
pub fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..m {
            if m - c < k - cur.len() {
                break;
            }
            cur.push(c);
            go(c + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

pub fn seat_counts(inst: &Instance, members: &[usize]) -> Vec<Vec<usize>> {
    let schema = inst.schema();
    let mut seats: Vec<Vec<usize>> = (0..schema.len()).map(|i| vec![0; schema.domain_size(i)]).collect();
    for &c in members {
        for (i, &v) in inst.db().candidate(c).values().iter().enumerate() {
            seats[i][v] += 1;
        }
    }
    seats
}

pub fn deviations(inst: &Instance, members: &[usize]) -> Vec<Vec<Rational>> {
    let k = rational::from_usize(members.len());
    seat_counts(inst, members)
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &s)| (rational::from_usize(s) / &k - inst.target().share(i, j)).abs())
                .collect()
        })
        .collect()
}

pub fn oracle_loss(inst: &Instance, kind: LossKind, members: &[usize]) -> Rational {
    let dev = deviations(inst, members);
    let row_max = |row: &Vec<Rational>| row.iter().max().cloned().unwrap_or_else(|| ratio(0, 1));
    match kind {
        LossKind::L1 => dev.iter().flatten().sum(),
        LossKind::L1Max => dev.iter().map(row_max).sum(),
        LossKind::LMax => dev.iter().map(row_max).max().unwrap_or_else(|| ratio(0, 1)),
    }
}

/// Optimal loss and every optimal committee, by plain enumeration.
pub fn oracle_optima(inst: &Instance, kind: LossKind) -> (Rational, Vec<Vec<usize>>) {
    let mut best: Option<Rational> = None;
    let mut optima = Vec::new();
    for c in combinations(inst.db().len(), inst.k()) {
        let l = oracle_loss(inst, kind, &c);
        match &best {
            Some(b) if l > *b => {}
            Some(b) if l == *b => optima.push(c),
            _ => {
                best = Some(l);
                optima = vec![c];
            }
        }
    }
    (best.expect("at least one committee"), optima)
}

pub fn names(inst: &Instance, members: &[usize]) -> Vec<String> {
    let mut out: Vec<String> = members
        .iter()
        .map(|&c| inst.db().candidate(c).name().to_string())
        .collect();
    out.sort();
    out
}

pub fn exact_cover_exists(universe: usize, sets: &[[usize; 3]]) -> bool {
    let full: u64 = (1 << universe) - 1;
    let masks: Vec<u64> = sets.iter().map(|s| s.iter().fold(0, |m, &e| m | 1 << e)).collect();
    fn go(covered: u64, full: u64, masks: &[u64]) -> bool {
        if covered == full {
            return true;
        }
        let first = (!covered).trailing_zeros();
        masks
            .iter()
            .any(|&m| m & (1 << first) != 0 && m & covered == 0 && go(covered | m, full, masks))
    }
    go(0, full, &masks)
}

/// A vertex set of size `k` whose closed neighbourhoods partition the
/// vertices.
pub fn perfect_code_exists(n: usize, edges: &[(usize, usize)], k: usize) -> bool {
    let mut closed: Vec<u64> = (0..n).map(|v| 1 << v).collect();
    for &(u, v) in edges {
        closed[u] |= 1 << v;
        closed[v] |= 1 << u;
    }
    let full: u64 = (1 << n) - 1;
    combinations(n, k).iter().any(|code| {
        let mut seen = 0u64;
        for &v in code {
            if seen & closed[v] != 0 {
                return false;
            }
            seen |= closed[v];
        }
        seen == full
    })
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

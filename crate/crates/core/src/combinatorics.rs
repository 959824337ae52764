//! k-subset enumeration in lexicographic order, with ranking so that
//! enumeration can be split into contiguous chunks.

/// `C(n, k)` or `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// The `rank`-th k-subset of `0..n` in lexicographic order.
pub fn unrank(mut rank: u128, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let left = k - slot - 1;
        loop {
            let with_next = binomial(n - next - 1, left).unwrap_or(u128::MAX);
            if rank < with_next {
                out.push(next);
                next += 1;
                break;
            }
            rank -= with_next;
            next += 1;
        }
    }
    out
}

/// Advances `combo` to the next k-subset of `0..n`; false when exhausted.
pub fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All k-subsets of `items`, lexicographic by position.
pub fn subsets<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let n = items.len();
    if k > n {
        return Vec::new();
    }
    let mut combo: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    loop {
        out.push(combo.iter().map(|&i| items[i]).collect());
        if !next_combination(&mut combo, n) {
            break;
        }
    }
    out
}

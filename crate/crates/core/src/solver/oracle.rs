//! Independent TSP oracles: exhaustive enumeration and Held-Karp.

use crate::encode::Tour;
use crate::error::{Error, Result};
use crate::instance::Instance;

pub const BRUTEFORCE_MAX_N: usize = 10;
pub const HELD_KARP_MAX_N: usize = 16;

/// Exhaustive search over tours with city 0 first and `order[1] < order[n-1]`.
/// Returns the lexicographically smallest optimal tour.
pub fn tsp_oracle_bruteforce(inst: &Instance) -> Result<(Tour, i64)> {
    let n = inst.n();
    if !(3..=BRUTEFORCE_MAX_N).contains(&n) {
        return Err(Error::UnsupportedSize { what: "brute-force oracle", n, min: 3, max: BRUTEFORCE_MAX_N });
    }
    let mut order = vec![0usize];
    let mut used = vec![false; n];
    used[0] = true;
    let mut best: Option<(Vec<usize>, i64)> = None;
    enumerate(inst, &mut order, &mut used, 0, &mut best);
    let (order, len) = best.expect("n >= 3 has at least one tour");
    Ok((Tour::new(order)?, len))
}

fn enumerate(
    inst: &Instance,
    order: &mut Vec<usize>,
    used: &mut [bool],
    len: i64,
    best: &mut Option<(Vec<usize>, i64)>,
) {
    let n = inst.n();
    if order.len() == n {
        if order[1] > order[n - 1] {
            return;
        }
        let total = len + inst.length(order[n - 1], 0);
        if best.as_ref().is_none_or(|(_, b)| total < *b) {
            *best = Some((order.clone(), total));
        }
        return;
    }
    let last = *order.last().unwrap();
    for v in 1..n {
        if used[v] {
            continue;
        }
        used[v] = true;
        order.push(v);
        enumerate(inst, order, used, len + inst.length(last, v), best);
        order.pop();
        used[v] = false;
    }
}

/// Subset dynamic program over paths from city 0. Ties resolve to the
/// smallest predecessor index.
pub fn tsp_oracle_held_karp(inst: &Instance) -> Result<(Tour, i64)> {
    let n = inst.n();
    if !(3..=HELD_KARP_MAX_N).contains(&n) {
        return Err(Error::UnsupportedSize { what: "Held-Karp oracle", n, min: 3, max: HELD_KARP_MAX_N });
    }
    // cities 1..n map to bits 0..n-1
    let m = n - 1;
    let full = (1usize << m) - 1;
    let mut dp = vec![i64::MAX; (1 << m) * m];
    let mut parent = vec![usize::MAX; (1 << m) * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = inst.length(0, j + 1);
    }
    for mask in 1..=full {
        for j in 0..m {
            let cur = dp[mask * m + j];
            if mask & (1 << j) == 0 || cur == i64::MAX {
                continue;
            }
            for k in 0..m {
                if mask & (1 << k) != 0 {
                    continue;
                }
                let next = mask | (1 << k);
                let cand = cur + inst.length(j + 1, k + 1);
                let slot = next * m + k;
                if cand < dp[slot] || (cand == dp[slot] && j < parent[slot]) {
                    dp[slot] = cand;
                    parent[slot] = j;
                }
            }
        }
    }
    let (mut last, mut best) = (0, i64::MAX);
    for j in 0..m {
        let total = dp[full * m + j] + inst.length(j + 1, 0);
        if total < best {
            best = total;
            last = j;
        }
    }
    let mut rev = Vec::with_capacity(n);
    let mut mask = full;
    loop {
        rev.push(last + 1);
        let p = parent[mask * m + last];
        mask &= !(1 << last);
        if mask == 0 {
            break;
        }
        last = p;
    }
    rev.push(0);
    rev.reverse();
    Ok((Tour::new(rev)?.canonical(), best))
}

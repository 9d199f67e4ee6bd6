//! Shared brute-force oracles for tests: element-level subgroup and quotient
//! computations that never touch the Smith-normal-form pipeline, so they can
//! sit on the other side of an equality from it.

use crate::abgroup::CanonicalForm;
use std::collections::BTreeSet;

/// Oracle: combine a multiset of cyclic orders (0 = Z) into an
/// invariant-factor chain by merging prime-power partitions.
pub(crate) fn combine_cyclics(orders: &[u64]) -> CanonicalForm {
    use std::collections::BTreeMap;
    let free = orders.iter().filter(|&&o| o == 0).count();
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &o in orders.iter().filter(|&&o| o > 1) {
        let mut rest = o;
        let mut p = 2;
        while p * p <= rest {
            if rest % p == 0 {
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                by_prime.entry(p).or_default().push(e);
            }
            p += 1;
        }
        if rest > 1 {
            by_prime.entry(rest).or_default().push(1);
        }
    }
    let depth = by_prime.values().map(|v| v.len()).max().unwrap_or(0);
    let mut factors = vec![1u64; depth];
    for (p, mut exps) in by_prime {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (slot, e) in exps.into_iter().enumerate() {
            factors[slot] *= p.pow(e);
        }
    }
    factors.reverse();
    CanonicalForm { invariant_factors: factors, free_rank: free }
}

/// All abelian groups of order ≤ bound, as lists of prime-power orders.
pub(crate) fn all_abelian_groups(bound: u64) -> Vec<Vec<u64>> {
    fn partitions(n: u32) -> Vec<Vec<u32>> {
        fn go(n: u32, max: u32) -> Vec<Vec<u32>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in (1..=n.min(max)).rev() {
                for rest in go(n - first, first) {
                    let mut p = vec![first];
                    p.extend(rest);
                    out.push(p);
                }
            }
            out
        }
        go(n, n)
    }
    let mut out = vec![];
    for order in 1..=bound {
        // Factor the order, then take all products of per-prime partitions.
        let mut rest = order;
        let mut fac: Vec<(u64, u32)> = Vec::new();
        let mut p = 2;
        while p * p <= rest {
            if rest % p == 0 {
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                fac.push((p, e));
            }
            p += 1;
        }
        if rest > 1 {
            fac.push((rest, 1));
        }
        let mut shapes: Vec<Vec<u64>> = vec![vec![]];
        for (p, e) in fac {
            let mut next = Vec::new();
            for part in partitions(e) {
                for s in &shapes {
                    let mut s = s.clone();
                    s.extend(part.iter().map(|&k| p.pow(k)));
                    next.push(s);
                }
            }
            shapes = next;
        }
        out.extend(shapes);
    }
    out
}

/// Closure of the generated subgroup inside ⊕ Z/mᵢ.
pub(crate) fn subgroup_closure(gens: &[Vec<u64>], moduli: &[u64]) -> BTreeSet<Vec<u64>> {
    let mut seen = BTreeSet::new();
    let zero: Vec<u64> = moduli.iter().map(|_| 0).collect();
    seen.insert(zero);
    let mut frontier: Vec<Vec<u64>> = seen.iter().cloned().collect();
    while let Some(v) = frontier.pop() {
        for g in gens {
            let w: Vec<u64> =
                v.iter().zip(g).zip(moduli).map(|((a, b), m)| (a + b) % m.max(&1)).collect();
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen
}

/// Structure of (⊕ Z/mᵢ)/H by annihilator counting: for each prime p,
/// N(k) = #{cosets killed by p^k} determines the partition of p-exponents.
pub(crate) fn quotient_structure(
    order: u64,
    moduli: &[u64],
    sub: &BTreeSet<Vec<u64>>,
) -> CanonicalForm {
    let mut pieces: Vec<u64> = Vec::new();
    let mut rest = order;
    let mut p = 2;
    let all: Vec<Vec<u64>> = {
        let mut out = vec![vec![]];
        for &m in moduli {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..m.max(1)).map(move |c| {
                        let mut v = v.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        out
    };
    while rest > 1 {
        if rest % p != 0 {
            p += 1;
            continue;
        }
        // count, for k = 1, 2, …, how many cosets p^k kills
        let mut exps: Vec<u32> = Vec::new();
        let mut prev = 1u64;
        for k in 1.. {
            let pk = p.pow(k);
            let killed = all
                .iter()
                .filter(|v| {
                    let scaled: Vec<u64> = v
                        .iter()
                        .zip(moduli)
                        .map(|(a, m)| (a * (pk % m.max(&1))) % m.max(&1))
                        .collect();
                    sub.contains(&scaled)
                })
                .count() as u64
                / sub.len() as u64;
            // #new summands of exponent ≥ k = log_p(killed/prev)
            let mut grew = killed / prev;
            let mut count = 0;
            while grew > 1 {
                grew /= p;
                count += 1;
            }
            for _ in 0..count {
                exps.push(k);
            }
            if killed == prev {
                break;
            }
            prev = killed;
        }
        // exps currently counts "≥ k" increments; convert to exponents:
        // a summand of exponent e is counted once at each k ≤ e, so the
        // multiset of exponents is read off by conjugating the partition.
        let mut counts_at = std::collections::BTreeMap::new();
        for &k in &exps {
            *counts_at.entry(k).or_insert(0u32) += 1;
        }
        let maxk = exps.iter().copied().max().unwrap_or(0);
        let mut summands: Vec<u32> = Vec::new();
        let mut active: u32 = 0;
        for k in (1..=maxk).rev() {
            let at_k = counts_at.get(&k).copied().unwrap_or(0);
            // at_k = number of summands with exponent ≥ k
            let new = at_k.saturating_sub(active);
            for _ in 0..new {
                summands.push(k);
            }
            active = at_k.max(active);
        }
        for e in summands {
            pieces.push(p.pow(e));
            for _ in 0..e {
                rest /= p;
            }
        }
        p += 1;
    }
    combine_cyclics(&pieces)
}

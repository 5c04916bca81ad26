//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the search code it is used to check.

#![allow(dead_code)]

use permcodec::Permutation;

/// Every strictly increasing index tuple of length `k` below `n`.
pub fn index_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Pairwise order comparison of the subsequence against the pattern.
pub fn is_occurrence(host: &[u32], q: &[u32], idx: &[usize]) -> bool {
    (0..q.len()).all(|a| (0..q.len()).all(|b| (host[idx[a]] < host[idx[b]]) == (q[a] < q[b])))
}

pub fn brute_occurrences(host: &[u32], q: &[u32]) -> Vec<Vec<usize>> {
    index_tuples(host.len(), q.len())
        .into_iter()
        .filter(|idx| is_occurrence(host, q, idx))
        .collect()
}

pub fn brute_contains(host: &[u32], q: &[u32]) -> bool {
    !brute_occurrences(host, q).is_empty()
}

/// All permutations of `1..=n` by recursive insertion (independent of the
/// library's lexicographic generator), sorted.
pub fn all_perms(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for smaller in all_perms(n - 1) {
        for pos in 0..=smaller.len() {
            let mut v = smaller.clone();
            v.insert(pos, n as u32);
            out.push(v);
        }
    }
    out.sort();
    out
}

pub fn brute_avoiders(q: &Permutation, n: usize) -> Vec<Vec<u32>> {
    all_perms(n)
        .into_iter()
        .filter(|p| !brute_contains(p, q.values()))
        .collect()
}

/// Catalan numbers from `C_{n+1} = sum_i C_i C_{n-i}`.
pub fn catalan(n_max: usize) -> Vec<u64> {
    let mut c = vec![1u64];
    for n in 0..n_max {
        c.push((0..=n).map(|i| c[i] * c[n - i]).sum());
    }
    c
}

pub fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

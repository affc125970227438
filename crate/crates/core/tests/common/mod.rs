//! Oracles and corpora shared by the integration tests. Nothing here calls
//! the crate's solvers.

#![allow(dead_code)]

use std::time::Instant;

use contagion::amount::{dec, ratio};
use contagion::arborescence::every_node_fails_when_shocked;
use contagion::generate::{gen_random_in_arborescence, RandomParams};
use contagion::NetworkSpec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Propagation written directly from the model's definitions.
/// Returns each node's failure step; `horizon = None` runs to quiescence.
pub fn reference_fail_steps(spec: &NetworkSpec, shocked: &[usize], horizon: Option<usize>) -> Vec<Option<usize>> {
    let n = spec.n();
    let mut lent = vec![BigRational::zero(); n];
    let mut borrowed = vec![BigRational::zero(); n];
    for (e, w) in spec.edges().iter().zip(spec.weights()) {
        lent[e.src] += w;
        borrowed[e.dst] += w;
    }
    let mut c = vec![BigRational::zero(); n];
    for v in 0..n {
        let ext = &spec.alpha()[v] * spec.external_total();
        let e_v = &borrowed[v] - &lent[v] + &ext;
        c[v] = spec.gamma() * (&borrowed[v] + &ext);
        if shocked.contains(&v) {
            c[v] -= spec.phi() * e_v;
        }
    }
    let mut alive = vec![true; n];
    let mut out = vec![None; n];
    let mut t = 1;
    while horizon.is_none_or(|h| t <= h) && alive.iter().any(|&a| a) {
        let failing: Vec<usize> = (0..n).filter(|&v| alive[v] && c[v].is_negative()).collect();
        if failing.is_empty() {
            break;
        }
        let mut next = c.clone();
        for &v in &failing {
            let creditors: Vec<usize> = spec
                .edges()
                .iter()
                .filter(|e| e.dst == v && alive[e.src])
                .map(|e| e.src)
                .collect();
            if creditors.is_empty() {
                continue;
            }
            let loss = c[v].abs().min(borrowed[v].clone()) / int(creditors.len());
            for u in creditors {
                next[u] -= &loss;
            }
        }
        for &v in &failing {
            alive[v] = false;
            out[v] = Some(t);
        }
        c = next;
        t += 1;
    }
    out
}

pub fn reference_failed(spec: &NetworkSpec, shocked: &[usize], horizon: Option<usize>) -> usize {
    reference_fail_steps(spec, shocked, horizon).iter().flatten().count()
}

pub fn reference_kills(spec: &NetworkSpec, shocked: &[usize], horizon: Option<usize>) -> bool {
    reference_failed(spec, shocked, horizon) == spec.n()
}

pub fn members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// All `k`-subsets of `0..n` as bitmasks.
pub fn subsets(n: usize, k: usize) -> impl Iterator<Item = u64> {
    (0u64..1 << n).filter(move |m| m.count_ones() as usize == k)
}

/// Smallest killing shock set size by exhaustive search.
pub fn reference_stab_size(spec: &NetworkSpec, horizon: Option<usize>) -> Option<usize> {
    let n = spec.n();
    (1..=n).find(|&k| subsets(n, k).any(|m| reference_kills(spec, &members(m, n), horizon)))
}

/// Largest failure count over shock sets of size `k`.
pub fn reference_dual_failed(spec: &NetworkSpec, k: usize, horizon: Option<usize>) -> usize {
    let n = spec.n();
    subsets(n, k)
        .map(|m| reference_failed(spec, &members(m, n), horizon))
        .max()
        .unwrap_or(0)
}

pub fn min_dominating_set(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut closed = vec![0u64; n];
    for v in 0..n {
        closed[v] |= 1 << v;
    }
    for &(a, b) in edges {
        closed[a] |= 1 << b;
        closed[b] |= 1 << a;
    }
    let full = (1u64 << n) - 1;
    (1..=n)
        .find(|&k| subsets(n, k).any(|m| members(m, n).iter().fold(0, |acc, &v| acc | closed[v]) == full))
        .unwrap()
}

pub fn min_node_cover(n: usize, edges: &[(usize, usize)]) -> usize {
    (0..=n)
        .find(|&k| subsets(n, k).any(|m| edges.iter().all(|&(a, b)| m >> a & 1 == 1 || m >> b & 1 == 1)))
        .unwrap()
}

fn union(sets: &[Vec<usize>], chosen: u64) -> u64 {
    sets.iter()
        .enumerate()
        .filter(|(j, _)| chosen >> j & 1 == 1)
        .fold(0, |acc, (_, s)| s.iter().fold(acc, |a, &x| a | 1 << x))
}

pub fn min_set_cover(universe: usize, sets: &[Vec<usize>]) -> Option<usize> {
    let full = (1u64 << universe) - 1;
    (1..=sets.len()).find(|&k| subsets(sets.len(), k).any(|m| union(sets, m) == full))
}

pub fn max_coverage(sets: &[Vec<usize>], k: usize) -> usize {
    subsets(sets.len(), k)
        .map(|m| union(sets, m).count_ones() as usize)
        .max()
        .unwrap()
}

/// Hyperedges whose members all lie in `chosen`.
pub fn contained(edges: &[Vec<usize>], chosen: u64) -> usize {
    edges.iter().filter(|e| e.iter().all(|&v| chosen >> v & 1 == 1)).count()
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected_graph(n: usize, extra: f64, r: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((r.gen_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !edges.contains(&(a, b)) && r.gen_bool(extra) {
                edges.push((a, b));
            }
        }
    }
    edges
}

pub fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Set system over `0..universe` in which every element lies in at least
/// `min_mult` of the `m` sets.
pub fn random_set_system(universe: usize, m: usize, min_mult: usize, r: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    loop {
        let mut sets: Vec<Vec<usize>> = (0..m)
            .map(|_| (0..universe).filter(|_| r.gen_bool(0.45)).collect())
            .collect();
        for x in 0..universe {
            while sets.iter().filter(|s| s.contains(&x)).count() < min_mult.min(m) {
                let j = r.gen_range(0..m);
                if !sets[j].contains(&x) {
                    sets[j].push(x);
                    sets[j].sort_unstable();
                }
            }
        }
        if sets.iter().all(|s| !s.is_empty()) {
            return sets;
        }
    }
}

/// `d`-uniform hypergraph on `0..n` with every vertex in some hyperedge.
pub fn random_hypergraph(n: usize, d: usize, r: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let target = r.gen_range(1..=2 * n);
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut guard = 0;
    while guard < 1000 {
        guard += 1;
        let uncovered: Vec<usize> = (0..n).filter(|v| !edges.iter().any(|e| e.contains(v))).collect();
        if edges.len() >= target && uncovered.is_empty() {
            break;
        }
        let mut e: Vec<usize> = Vec::new();
        if let Some(&v) = uncovered.first() {
            e.push(v);
        }
        while e.len() < d {
            let v = r.gen_range(0..n);
            if !e.contains(&v) {
                e.push(v);
            }
        }
        e.sort_unstable();
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    edges
}

/// Parameter regimes for random arborescences: `(γ, Φ, E/n)`.
pub const TREE_REGIMES: [(&str, &str, &str); 8] = [
    ("0.1", "0.4", "1.5"),
    ("0.1", "0.4", "3"),
    ("0.1", "0.35", "2"),
    ("0.1", "0.35", "10"),
    ("0.2", "0.5", "2"),
    ("0.2", "0.5", "5"),
    ("0.1", "0.15", "4"),
    ("0.05", "0.3", "1.5"),
];

/// Seeded random in-arborescences satisfying the every-node-fails
/// precondition, `count` of them with `min_n ≤ n ≤ max_n`.
pub fn tree_corpus(count: usize, min_n: usize, max_n: usize, salt: u64) -> Vec<NetworkSpec> {
    let mut out = Vec::with_capacity(count);
    let mut seed = salt;
    while out.len() < count {
        seed += 1;
        let mut r = rng(seed);
        let n = r.gen_range(min_n..=max_n);
        let (g, p, ebar) = TREE_REGIMES[r.gen_range(0..TREE_REGIMES.len())];
        let cap = r.gen_range(1..=4);
        let params = RandomParams::new(dec(g), dec(p), dec(ebar) * ratio(n as i64, 1));
        let spec = gen_random_in_arborescence(n, cap, &params, seed).unwrap();
        if every_node_fails_when_shocked(&spec) {
            out.push(spec);
        }
    }
    out
}

/// Prints the one-line verdict of an acceptance criterion.
pub fn verdict(id: &str, pass: bool, started: Instant, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!(
        "criterion {id}: {status} ({:.2}s) {detail}",
        started.elapsed().as_secs_f64()
    );
}

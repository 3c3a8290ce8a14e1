//! Independent oracles shared by the integration tests. Everything here is
//! plain exhaustive enumeration and never calls into the solver paths it
//! checks.
#![allow(dead_code)]

use std::collections::BTreeMap;

use tlsg::gadget::Gadget;
use tlsg::{Configuration, WeightedGraph};

pub fn independent(g: &WeightedGraph, mask: u64) -> bool {
    g.edges().iter().all(|&(u, v)| mask >> u & 1 == 0 || mask >> v & 1 == 0)
}

pub fn mask_weight(g: &WeightedGraph, mask: u64) -> i64 {
    (0..g.n()).filter(|&v| mask >> v & 1 == 1).map(|v| g.weight(v)).sum()
}

/// Maximum weight and all maximum configurations by 2ⁿ enumeration.
pub fn brute_mwis(g: &WeightedGraph) -> (i64, Vec<Configuration>) {
    assert!(g.n() <= 24);
    let mut best = i64::MIN;
    let mut sols = Vec::new();
    for mask in 0..1u64 << g.n() {
        if !independent(g, mask) {
            continue;
        }
        let w = mask_weight(g, mask);
        if w > best {
            best = w;
            sols.clear();
        }
        if w == best {
            sols.push(Configuration::from_mask(g.n(), mask));
        }
    }
    sols.sort();
    (best, sols)
}

/// All maximal independent sets by 2ⁿ enumeration.
pub fn brute_maximal(g: &WeightedGraph) -> Vec<Configuration> {
    let mut out = Vec::new();
    for mask in 0..1u64 << g.n() {
        if !independent(g, mask) {
            continue;
        }
        let maximal = (0..g.n()).all(|v| mask >> v & 1 == 1 || !independent(g, mask | 1 << v));
        if maximal {
            out.push(Configuration::from_mask(g.n(), mask));
        }
    }
    out.sort();
    out
}

/// Deterministic pseudo-random graph from a seed (splitmix64).
pub fn random_graph(seed: u64, n: usize, p_edge: f64, max_weight: i64) -> WeightedGraph {
    let mut s = seed;
    let mut next = move || {
        s = s.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = s;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    let weights = (0..n).map(|_| 1 + (next() % max_weight as u64) as i64).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if (next() as f64 / u64::MAX as f64) < p_edge {
                edges.push((u, v));
            }
        }
    }
    WeightedGraph::new(weights, edges).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            let other = if a == u { b } else if b == u { a } else { continue };
            if !seen[other] {
                seen[other] = true;
                stack.push(other);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// One representative edge list per isomorphism class of connected graphs
/// on `n` vertices, by canonical minimum over all relabellings.
pub fn connected_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let perms = permutations(n);
    let mut classes = std::collections::BTreeSet::new();
    for mask in 0u64..1 << pairs.len() {
        let edges: Vec<_> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        if !connected(n, &edges) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| edges.iter().fold(0u64, |m, &(u, v)| m | 1 << index(p[u], p[v])))
            .min()
            .unwrap();
        classes.insert(canon);
    }
    classes
        .into_iter()
        .map(|m| (0..pairs.len()).filter(|&i| m >> i & 1 == 1).map(|i| pairs[i]).collect())
        .collect()
}

/// Pin assignments reached by the optimal sets, with their multiplicities.
pub fn brute_projection(g: &WeightedGraph, pins: &[usize]) -> BTreeMap<Configuration, usize> {
    let mut out = BTreeMap::new();
    for s in brute_mwis(g).1 {
        *out.entry(s.project(pins)).or_insert(0) += 1;
    }
    out
}

/// Exhaustive certification: every allowed assignment has exactly one
/// optimum and nothing else is optimal.
pub fn brute_certified(g: &Gadget) -> bool {
    let proj = brute_projection(&g.graph, &g.pins);
    let allowed = g.constraint.configurations();
    proj.keys().cloned().collect::<Vec<_>>() == allowed && proj.values().all(|&k| k == 1)
}

/// Smallest total weight over all vectors in `0..=cap`, by enumeration.
pub fn brute_weights(n: usize, targets: &[u64], others: &[u64], cap: i64) -> Option<i64> {
    let weight = |w: &[i64], m: u64| (0..n).filter(|&i| m >> i & 1 == 1).map(|i| w[i]).sum::<i64>();
    let mut w = vec![0i64; n];
    let mut best: Option<i64> = None;
    loop {
        let e = weight(&w, targets[0]);
        if e >= 1
            && targets.iter().all(|&t| weight(&w, t) == e)
            && others.iter().all(|&m| weight(&w, m) < e)
        {
            let s = w.iter().sum();
            best = Some(best.map_or(s, |b: i64| b.min(s)));
        }
        let mut i = 0;
        while i < n && w[i] == cap {
            w[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
        w[i] += 1;
    }
}

pub fn ilp_case(seed: u64, n: usize, p_edge: f64, pick: u64) -> (Vec<Configuration>, Vec<Configuration>) {
    let g = random_graph(seed, n, p_edge, 1);
    let mis = brute_maximal(&g);
    let mut targets: Vec<_> = mis
        .iter()
        .enumerate()
        .filter(|(i, _)| pick >> (i % 64) & 1 == 1)
        .map(|(_, c)| c.clone())
        .collect();
    if targets.is_empty() {
        targets.push(mis[pick as usize % mis.len()].clone());
    }
    (mis, targets)
}

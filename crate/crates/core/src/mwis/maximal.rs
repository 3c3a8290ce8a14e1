//! Maximal independent sets as maximal cliques of the complement graph
//! (Bron–Kerbosch with Tomita pivoting on 64-bit vertex masks).

use crate::error::{Error, Result};
use crate::graph::{Configuration, WeightedGraph};

/// Default vertex cap for enumeration; the number of maximal independent
/// sets can grow as `3^(n/3)`.
pub const DEFAULT_ENUMERATION_CAP: usize = 30;

/// Neighbour masks of a graph with at most 64 vertices.
pub fn adjacency_masks(g: &WeightedGraph) -> Vec<u64> {
    assert!(g.n() <= 64);
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect()
}

/// All maximal independent sets as vertex masks, sorted so that the
/// corresponding configurations are in lexicographic order.
pub fn maximal_independent_masks(adj: &[u64]) -> Vec<u64> {
    let n = adj.len();
    assert!(n <= 64);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    // complement adjacency: u ~ v in the complement iff not adjacent in g
    let comp: Vec<u64> = (0..n).map(|v| all & !adj[v] & !(1 << v)).collect();
    let mut out = Vec::new();
    expand(&comp, 0, all, 0, &mut out);
    sort_lexicographic(&mut out, n);
    out
}

fn expand(comp: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    // pivot maximising |P ∩ N(u)| over P ∪ X
    let mut pivot = 0;
    let mut best = -1i32;
    let mut px = p | x;
    while px != 0 {
        let u = px.trailing_zeros() as usize;
        px &= px - 1;
        let c = (p & comp[u]).count_ones() as i32;
        if c > best {
            best = c;
            pivot = u;
        }
    }
    let mut cand = p & !comp[pivot];
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        let bit = 1u64 << v;
        expand(comp, r | bit, p & comp[v], x & comp[v], out);
        p &= !bit;
        x |= bit;
    }
}

/// Orders masks as configurations: vertex 0 is the most significant bit.
pub fn sort_lexicographic(masks: &mut [u64], n: usize) {
    masks.sort_unstable_by_key(|&m| m.reverse_bits() >> (64 - n.max(1)));
}

/// Every maximal independent set of `g`, lexicographically ordered.
pub fn maximal_independent_sets(g: &WeightedGraph, cap: usize) -> Result<Vec<Configuration>> {
    if g.n() == 0 {
        return Err(Error::Precondition("graph has no vertices".into()));
    }
    if g.n() > cap.min(64) {
        return Err(Error::EnumerationCap { n: g.n(), cap: cap.min(64) });
    }
    let adj = adjacency_masks(g);
    Ok(maximal_independent_masks(&adj)
        .into_iter()
        .map(|m| Configuration::from_mask(g.n(), m))
        .collect())
}

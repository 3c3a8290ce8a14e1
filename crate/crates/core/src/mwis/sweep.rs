//! Exact maximum-weight independent set by dynamic programming along a
//! vertex order. The state is the selection restricted to the frontier:
//! processed vertices that still have unprocessed neighbours. Cost grows
//! with the number of independent frontier selections, so this suits
//! long, thin graphs such as encoded layouts swept along their short side.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Configuration, WeightedGraph};
use crate::lattice::GridLayout;

/// Largest number of simultaneous frontier states before giving up.
pub const DEFAULT_STATE_CAP: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSolution {
    pub weight: i64,
    pub config: Configuration,
    /// Number of optimal configurations, saturating.
    pub count: u128,
}

/// Largest frontier met when processing vertices in `order`.
pub fn frontier_width(g: &WeightedGraph, order: &[usize]) -> usize {
    let last = last_use(g, order);
    let mut width: usize = 0;
    let mut active = 0usize;
    let mut leaving = vec![0usize; order.len()];
    for (t, &v) in order.iter().enumerate() {
        if last[v] > t {
            active += 1;
            leaving[last[v]] += 1;
        }
        active -= leaving[t];
        width = width.max(active);
    }
    width
}

fn last_use(g: &WeightedGraph, order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; g.n()];
    for (t, &v) in order.iter().enumerate() {
        pos[v] = t;
    }
    (0..g.n())
        .map(|v| g.neighbors(v).iter().map(|&u| pos[u]).fold(pos[v], usize::max))
        .collect()
}

/// Tries sweeps along the grid axes and both diagonals; returns the one
/// with the narrowest frontier.
pub fn layout_order(layout: &GridLayout) -> Vec<usize> {
    let g = layout.to_graph();
    let coords: Vec<_> = layout.coords().collect();
    let keys: [fn(i64, i64) -> (i64, i64); 4] = [
        |x, y| (x, y),
        |x, y| (y, x),
        |x, y| (x + y, x),
        |x, y| (x - y, x),
    ];
    keys.iter()
        .map(|key| {
            let mut order: Vec<usize> = (0..coords.len()).collect();
            order.sort_by_key(|&i| key(coords[i].x, coords[i].y));
            order
        })
        .min_by_key(|order| frontier_width(&g, order))
        .expect("four candidates")
}

/// Solves along `order`, which must be a permutation of the vertices.
pub fn sweep_mwis(g: &WeightedGraph, order: &[usize], state_cap: usize) -> Result<SweepSolution> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Precondition("graph has no vertices".into()));
    }
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(Error::Precondition("sweep order is not a permutation of the vertices".into()));
    }
    let last = last_use(g, order);
    let mut leaving: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &v in order {
        leaving[last[v]].push(v);
    }
    let mut slot = vec![usize::MAX; n];
    let mut free: Vec<usize> = (0..64).rev().collect();

    let mut states: Vec<(u64, i64, u128)> = vec![(0, 0, 1)];
    let mut parents: Vec<Vec<u32>> = Vec::with_capacity(n);
    for (t, &v) in order.iter().enumerate() {
        let nb_mask = g
            .neighbors(v)
            .iter()
            .filter(|&&u| slot[u] != usize::MAX)
            .fold(0u64, |m, &u| m | 1 << slot[u]);
        let own = if last[v] > t {
            let s = free
                .pop()
                .ok_or_else(|| Error::Budget("sweep frontier wider than 64 vertices".into()))?;
            slot[v] = s;
            1u64 << s
        } else {
            0
        };
        let mut clear = 0u64;
        for &u in &leaving[t] {
            if slot[u] != usize::MAX {
                clear |= 1 << slot[u];
            }
        }
        let mut index: HashMap<u64, usize> = HashMap::with_capacity(states.len() * 2);
        let mut next: Vec<(u64, i64, u128)> = Vec::with_capacity(states.len() * 2);
        let mut back: Vec<u32> = Vec::with_capacity(states.len() * 2);
        for (i, &(mask, val, count)) in states.iter().enumerate() {
            let mut offer = |m: u64, w: i64, choice: bool| {
                let key = m & !clear;
                let tag = i as u32 | (choice as u32) << 31;
                match index.get(&key) {
                    Some(&k) => {
                        let e = &mut next[k];
                        if w > e.1 {
                            *e = (key, w, count);
                            back[k] = tag;
                        } else if w == e.1 {
                            e.2 = e.2.saturating_add(count);
                        }
                    }
                    None => {
                        index.insert(key, next.len());
                        next.push((key, w, count));
                        back.push(tag);
                    }
                }
            };
            offer(mask, val, false);
            if mask & nb_mask == 0 {
                offer(mask | own, val + g.weight(v), true);
            }
        }
        if next.len() > state_cap || next.len() >= 1 << 31 {
            return Err(Error::Budget(format!(
                "sweep needs {} states at step {t}, cap {state_cap}",
                next.len()
            )));
        }
        for &u in &leaving[t] {
            if slot[u] != usize::MAX {
                free.push(slot[u]);
                slot[u] = usize::MAX;
            }
        }
        parents.push(back);
        states = next;
    }
    debug_assert_eq!(states.len(), 1);
    let (_, weight, count) = states[0];
    let mut bits = vec![false; n];
    let mut idx = 0usize;
    for t in (0..n).rev() {
        let tag = parents[t][idx];
        bits[order[t]] = tag >> 31 == 1;
        idx = (tag & !(1 << 31)) as usize;
    }
    Ok(SweepSolution {
        weight,
        config: Configuration::from_bits(bits),
        count,
    })
}

/// Exact optimum of a layout, sweeping along its narrower axis.
pub fn solve_layout(layout: &GridLayout) -> Result<SweepSolution> {
    sweep_mwis(&layout.to_graph(), &layout_order(layout), DEFAULT_STATE_CAP)
}

//! Exact maximum-weight independent set by branch and bound.
//!
//! Each search node first applies reductions to a fixpoint, splits the
//! remaining graph into connected components, bounds with a greedy weighted
//! clique cover and finally branches on a maximum-degree vertex.
//!
//! Two modes share the machinery. [`Mode::One`] keeps at least one optimum
//! and uses the non-strict forms of the reductions. [`Mode::All`] must keep
//! every optimum, so each reduction is only applied when it maps optima of
//! the reduced graph one-to-one onto optima of the original.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Configuration, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    One,
    All,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Branch nodes explored before giving up.
    pub node_budget: u64,
    /// Largest optimal solution set returned in [`Mode::All`].
    pub max_solutions: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            node_budget: 50_000_000,
            max_solutions: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MwisSolution {
    pub weight: i64,
    /// Lexicographically sorted.
    pub solutions: Vec<Configuration>,
}

type Decisions = Vec<(u32, bool)>;

#[derive(Debug, Clone)]
enum Rule {
    Leaf(usize),
    /// Selecting the folded vertex selects `on` and deselects `off`;
    /// deselecting it does the opposite.
    Fold { on: Vec<u32>, off: Vec<u32> },
}

#[derive(Debug, Clone)]
struct Vertex {
    weight: i64,
    adj: Vec<u32>,
}

#[derive(Debug, Clone, Default)]
struct Work {
    verts: BTreeMap<u32, Vertex>,
    offset: i64,
    decided: Decisions,
}

struct Search {
    mode: Mode,
    cfg: SolverConfig,
    rules: Vec<Rule>,
    nodes: u64,
    root_lb: i64,
    root_ub: i64,
}

pub fn solve(g: &WeightedGraph, mode: Mode, cfg: SolverConfig) -> Result<MwisSolution> {
    if g.n() == 0 {
        return Err(Error::Precondition("graph has no vertices".into()));
    }
    let mut work = Work::default();
    for v in 0..g.n() {
        work.verts.insert(
            v as u32,
            Vertex {
                weight: g.weight(v),
                adj: g.neighbors(v).iter().map(|&u| u as u32).collect(),
            },
        );
    }
    let mut search = Search {
        mode,
        cfg,
        rules: (0..g.n()).map(Rule::Leaf).collect(),
        nodes: 0,
        root_lb: greedy_lower_bound(&work),
        root_ub: clique_cover_bound(&work),
    };
    let (weight, lists) = search
        .solve(work, i64::MIN)?
        .expect("an unconstrained search always finds a solution");
    let mut solutions: Vec<Configuration> = lists.iter().map(|d| search.expand(d, g.n())).collect();
    solutions.sort();
    solutions.dedup();
    if mode == Mode::One {
        solutions.truncate(1);
    }
    Ok(MwisSolution { weight, solutions })
}

impl Search {
    fn expand(&self, decided: &Decisions, n: usize) -> Configuration {
        let mut bits = vec![false; n];
        let mut stack: Vec<(u32, bool)> = decided.clone();
        while let Some((m, val)) = stack.pop() {
            match &self.rules[m as usize] {
                Rule::Leaf(v) => bits[*v] = val,
                Rule::Fold { on, off } => {
                    stack.extend(on.iter().map(|&a| (a, val)));
                    stack.extend(off.iter().map(|&a| (a, !val)));
                }
            }
        }
        Configuration::from_bits(bits)
    }

    fn strict(&self) -> bool {
        self.mode == Mode::All
    }

    /// Optimum of `work` if it reaches `need`; in [`Mode::All`] every
    /// optimum, otherwise one.
    fn solve(&mut self, mut work: Work, need: i64) -> Result<Option<(i64, Vec<Decisions>)>> {
        self.nodes += 1;
        if self.nodes > self.cfg.node_budget {
            return Err(Error::NodeBudget {
                budget: self.cfg.node_budget,
                best_known: self.root_lb,
                upper_bound: self.root_ub,
            });
        }
        self.reduce(&mut work);
        if work.verts.is_empty() {
            return Ok((work.offset >= need).then(|| (work.offset, vec![work.decided])));
        }
        if work.offset + clique_cover_bound(&work) < need {
            return Ok(None);
        }
        let comps = components(&work);
        if comps.len() > 1 {
            return self.solve_components(work, comps, need);
        }

        let v = branch_vertex(&work);
        let mut best: Option<(i64, Vec<Decisions>)> = None;
        // the greedy value is attainable, so no optimum lies below it
        let mut need = need.max(greedy_lower_bound(&work) + work.offset);

        let mut with = work.clone();
        with.include(v);
        if let Some(r) = self.solve(with, need)? {
            need = if self.strict() { r.0 } else { r.0 + 1 };
            best = Some(r);
        }
        let mut without = work;
        without.exclude(v);
        if let Some(r) = self.solve(without, need)? {
            best = Some(match best {
                Some(mut b) if b.0 == r.0 && self.strict() => {
                    b.1.extend(r.1);
                    self.check_count(b.1.len())?;
                    b
                }
                Some(b) if b.0 >= r.0 => b,
                _ => r,
            });
        }
        Ok(best)
    }

    fn check_count(&self, count: usize) -> Result<()> {
        if count > self.cfg.max_solutions {
            return Err(Error::SolutionCap {
                cap: self.cfg.max_solutions,
            });
        }
        Ok(())
    }

    fn solve_components(&mut self, work: Work, comps: Vec<Vec<u32>>, need: i64) -> Result<Option<(i64, Vec<Decisions>)>> {
        let mut total = work.offset;
        let mut lists: Vec<Decisions> = vec![work.decided];
        for comp in comps {
            let mut sub = Work::default();
            for v in comp {
                sub.verts.insert(v, work.verts[&v].clone());
            }
            let (w, sub_lists) = self
                .solve(sub, i64::MIN)?
                .expect("an unconstrained search always finds a solution");
            total += w;
            self.check_count(lists.len() * sub_lists.len())?;
            lists = lists
                .iter()
                .flat_map(|a| {
                    sub_lists.iter().map(move |b| {
                        let mut d = a.clone();
                        d.extend_from_slice(b);
                        d
                    })
                })
                .collect();
        }
        Ok((total >= need).then_some((total, lists)))
    }

    fn reduce(&mut self, work: &mut Work) {
        let strict = self.strict();
        let mut queue: BTreeSet<u32> = work.verts.keys().copied().collect();
        while let Some(v) = queue.pop_first() {
            let Some(vx) = work.verts.get(&v) else { continue };
            let w = vx.weight;
            let adj = vx.adj.clone();
            let nbr_weight: i64 = adj.iter().map(|u| work.verts[u].weight).sum();
            let dominates = |a: i64, b: i64| if strict { a > b } else { a >= b };

            if dominates(w, nbr_weight) || adj.is_empty() {
                queue.extend(second_neighborhood(work, v));
                work.include(v);
                continue;
            }
            if adj.len() == 1 {
                let u = adj[0];
                if w < work.verts[&u].weight {
                    queue.extend(work.verts[&u].adj.iter().copied());
                    let m = self.new_rule(vec![u], vec![v]);
                    work.fold(m, v, &[u]);
                    queue.insert(m);
                    continue;
                }
            }
            let max_nbr = adj.iter().map(|u| work.verts[u].weight).max().unwrap_or(0);
            if adj.len() == 2 && w < nbr_weight && !work.adjacent(adj[0], adj[1]) && dominates(w, max_nbr) {
                let (a, b) = (adj[0], adj[1]);
                queue.extend(work.verts[&a].adj.iter().copied());
                queue.extend(work.verts[&b].adj.iter().copied());
                let m = self.new_rule(vec![a, b], vec![v]);
                work.fold(m, v, &[a, b]);
                queue.remove(&v);
                queue.insert(m);
                continue;
            }
            if adj.len() <= 8 && dominates(w, max_nbr) && is_clique(work, &adj) {
                queue.extend(second_neighborhood(work, v));
                work.include(v);
                continue;
            }
            // a neighbour u with N[v] ⊆ N[u] and w(v) ≥ w(u) is never needed
            if adj.len() <= 16 {
                let dominated: Vec<u32> = adj
                    .iter()
                    .copied()
                    .filter(|&u| {
                        let ux = &work.verts[&u];
                        dominates(w, ux.weight)
                            && ux.adj.len() >= adj.len()
                            && adj.iter().all(|&x| x == u || ux.adj.binary_search(&x).is_ok())
                    })
                    .collect();
                if !dominated.is_empty() {
                    for u in dominated {
                        queue.extend(work.verts[&u].adj.iter().copied());
                        work.exclude(u);
                    }
                    queue.insert(v);
                }
            }
        }
    }

    fn new_rule(&mut self, on: Vec<u32>, off: Vec<u32>) -> u32 {
        self.rules.push(Rule::Fold { on, off });
        (self.rules.len() - 1) as u32
    }
}

impl Work {
    fn adjacent(&self, a: u32, b: u32) -> bool {
        self.verts[&a].adj.binary_search(&b).is_ok()
    }

    fn remove(&mut self, v: u32) -> Vertex {
        let vx = self.verts.remove(&v).expect("removing a live vertex");
        for u in &vx.adj {
            if let Some(ux) = self.verts.get_mut(u) {
                if let Ok(i) = ux.adj.binary_search(&v) {
                    ux.adj.remove(i);
                }
            }
        }
        vx
    }

    fn include(&mut self, v: u32) {
        let vx = self.remove(v);
        self.offset += vx.weight;
        self.decided.push((v, true));
        for u in vx.adj {
            if self.verts.contains_key(&u) {
                self.remove(u);
                self.decided.push((u, false));
            }
        }
    }

    fn exclude(&mut self, v: u32) {
        self.remove(v);
        self.decided.push((v, false));
    }

    /// Replaces `center` and `sides` by vertex `m`, adjacent to every
    /// remaining neighbour of the sides, worth `Σ sides − center` on top of
    /// the `center` weight moved into the offset.
    fn fold(&mut self, m: u32, center: u32, sides: &[u32]) {
        let c = self.remove(center);
        self.offset += c.weight;
        let mut weight = -c.weight;
        let mut adj = BTreeSet::new();
        for &s in sides {
            let sx = self.remove(s);
            weight += sx.weight;
            adj.extend(sx.adj);
        }
        for s in sides {
            adj.remove(s);
        }
        adj.remove(&center);
        let adj: Vec<u32> = adj.into_iter().collect();
        for u in &adj {
            let ux = self.verts.get_mut(u).expect("live neighbour");
            let pos = ux.adj.binary_search(&m).unwrap_err();
            ux.adj.insert(pos, m);
        }
        debug_assert!(weight > 0);
        self.verts.insert(m, Vertex { weight, adj });
    }
}

fn second_neighborhood(work: &Work, v: u32) -> Vec<u32> {
    let mut out = Vec::new();
    for u in &work.verts[&v].adj {
        out.extend(work.verts[u].adj.iter().copied().filter(|&x| x != v));
    }
    out
}

fn is_clique(work: &Work, vs: &[u32]) -> bool {
    vs.iter()
        .enumerate()
        .all(|(i, &a)| vs[i + 1..].iter().all(|&b| work.adjacent(a, b)))
}

fn components(work: &Work) -> Vec<Vec<u32>> {
    let mut seen = BTreeSet::new();
    let mut comps = Vec::new();
    for &s in work.verts.keys() {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            for &u in &work.verts[&comp[i]].adj {
                if seen.insert(u) {
                    comp.push(u);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

fn branch_vertex(work: &Work) -> u32 {
    *work
        .verts
        .iter()
        .max_by(|(a, ax), (b, bx)| {
            ax.adj
                .len()
                .cmp(&bx.adj.len())
                .then(ax.weight.cmp(&bx.weight))
                .then(b.cmp(a))
        })
        .expect("non-empty work")
        .0
}

/// Weight of a greedy maximal independent set (heaviest first).
fn greedy_lower_bound(work: &Work) -> i64 {
    let mut order: Vec<_> = work.verts.iter().collect();
    order.sort_by(|(a, ax), (b, bx)| bx.weight.cmp(&ax.weight).then(a.cmp(b)));
    let mut blocked = BTreeSet::new();
    let mut total = 0;
    for (v, vx) in order {
        if blocked.contains(v) {
            continue;
        }
        total += vx.weight;
        blocked.insert(*v);
        blocked.extend(vx.adj.iter().copied());
    }
    total
}

/// Σ over a greedy clique partition of the heaviest weight in each clique.
fn clique_cover_bound(work: &Work) -> i64 {
    let mut order: Vec<_> = work.verts.iter().collect();
    order.sort_by(|(a, ax), (b, bx)| bx.weight.cmp(&ax.weight).then(a.cmp(b)));
    let mut clique_of: BTreeMap<u32, usize> = BTreeMap::new();
    let mut cliques: Vec<Vec<u32>> = Vec::new();
    let mut total = 0;
    for (v, vx) in order {
        let mut placed = false;
        let mut tried = BTreeSet::new();
        for u in &vx.adj {
            let Some(&c) = clique_of.get(u) else { continue };
            if !tried.insert(c) {
                continue;
            }
            if cliques[c].iter().all(|x| vx.adj.binary_search(x).is_ok()) {
                cliques[c].push(*v);
                clique_of.insert(*v, c);
                placed = true;
                break;
            }
        }
        if !placed {
            clique_of.insert(*v, cliques.len());
            cliques.push(vec![*v]);
            total += vx.weight;
        }
    }
    total
}

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::lattice::{GridCoord, GridLayout, LatticeFamily};
use crate::mwis::{adjacency_masks, maximal_independent_masks};

use super::ilp::{Objective, WeightProgram, DEFAULT_NODE_LIMIT, DEFAULT_WEIGHT_CAP};
use super::patch::{open_pin_candidates, patch_masks_sized, PatchMask};
use super::target::{project_mask, TargetSets};
use super::{Gadget, LogicalConstraint};

struct Choice<'a> {
    n: usize,
    pins: &'a [usize],
    groups: &'a [Vec<u64>],
    /// Maximal sets whose pin projection is not allowed.
    outside: Vec<u64>,
    chosen: Vec<u64>,
    leaves: u64,
    best: Option<((i64, i64), Vec<i64>)>,
}

/// How pin tuples are drawn from a candidate layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PinSelection {
    /// Increasing tuples of open boundary sites, in site order.
    Combinations,
    /// Every ordered tuple of distinct open boundary sites.
    Permutations,
    /// Fixed patch coordinates; masks missing any of them are skipped.
    Explicit(Vec<Vec<GridCoord>>),
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub family: LatticeFamily,
    pub rows: usize,
    pub cols: usize,
    pub constraint: LogicalConstraint,
    pub pins: PinSelection,
    pub objective: Objective,
    pub weight_cap: i64,
    /// Largest number of masks the patch may generate.
    pub stream_cap: u64,
    pub ilp_node_limit: u64,
    /// Target choices tried per pin tuple before moving on.
    pub max_target_sets: u64,
    pub min_sites: usize,
    pub max_sites: usize,
    /// Stop after the first gadget.
    pub stop_at_first: bool,
}

impl SearchConfig {
    pub fn new(family: LatticeFamily, rows: usize, cols: usize, constraint: LogicalConstraint) -> Self {
        Self {
            family,
            rows,
            cols,
            constraint,
            pins: PinSelection::Permutations,
            objective: Objective::Sum,
            weight_cap: DEFAULT_WEIGHT_CAP,
            stream_cap: 1 << 16,
            ilp_node_limit: DEFAULT_NODE_LIMIT,
            max_target_sets: 1 << 16,
            min_sites: 1,
            max_sites: usize::MAX,
            stop_at_first: false,
        }
    }
}

/// Lazy stream of certified gadgets, ordered by patch mask (site count,
/// then mask value) and pin tuple. For each mask and pin tuple the best
/// weighting over all target choices is emitted, ranked by objective and
/// then by energy.
pub struct Search {
    cfg: SearchConfig,
    masks: std::vec::IntoIter<PatchMask>,
    pending: VecDeque<Result<Gadget>>,
    done: bool,
    pub masks_visited: usize,
    pub programs_solved: u64,
}

pub fn search(cfg: SearchConfig) -> Result<Search> {
    // fixed pin coordinates break the patch symmetry, so every copy is kept
    let dedup = !matches!(cfg.pins, PinSelection::Explicit(_));
    let mut required = 0u32;
    if let PinSelection::Explicit(sets) = &cfg.pins {
        if let Some(s) = sets.iter().find(|s| s.len() != cfg.constraint.arity()) {
            return Err(Error::Precondition(format!(
                "pin set of size {} for a constraint of arity {}",
                s.len(),
                cfg.constraint.arity()
            )));
        }
        let bit = |c: &GridCoord| {
            (c.x >= 0 && c.y >= 0 && (c.x as usize) < cfg.cols && (c.y as usize) < cfg.rows)
                .then(|| 1u32 << (c.y as usize * cfg.cols + c.x as usize))
        };
        // sites shared by every pin set must be present in each mask
        required = sets
            .iter()
            .map(|s| s.iter().map(bit).try_fold(0u32, |acc, b| b.map(|b| acc | b)).unwrap_or(0))
            .reduce(|a, b| a & b)
            .unwrap_or(0);
    }
    let lo = cfg.min_sites.max(cfg.constraint.arity());
    let hi = cfg.max_sites.min(cfg.rows * cfg.cols);
    let masks = if lo > hi {
        Vec::new()
    } else {
        patch_masks_sized(cfg.family, cfg.rows, cfg.cols, lo..=hi, required, cfg.stream_cap, dedup)?
    };
    Ok(Search { cfg, masks: masks.into_iter(), pending: VecDeque::new(), done: false, masks_visited: 0, programs_solved: 0 })
}

impl Iterator for Search {
    type Item = Result<Gadget>;

    fn next(&mut self) -> Option<Result<Gadget>> {
        loop {
            if let Some(item) = self.pending.pop_front() {
                if self.cfg.stop_at_first && item.is_ok() {
                    self.done = true;
                    self.pending.clear();
                }
                return Some(item);
            }
            if self.done {
                return None;
            }
            let mask = self.masks.next()?;
            self.masks_visited += 1;
            self.visit(&mask);
        }
    }
}

/// Ordered tuples of `k` items; increasing tuples only when `ordered` is false.
fn tuples(items: &[usize], k: usize, ordered: bool) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, ordered: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for (i, &x) in items.iter().enumerate() {
            if cur.contains(&x) {
                continue;
            }
            if !ordered && cur.last().is_some_and(|&l| items.iter().position(|&y| y == l).unwrap() >= i) {
                continue;
            }
            cur.push(x);
            rec(items, k, ordered, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, ordered, &mut Vec::new(), &mut out);
    out
}

impl Search {
    fn visit(&mut self, mask: &PatchMask) {
        let layout = mask.layout(self.cfg.family);
        let graph = layout.to_graph();
        let n = graph.n();
        let mis = maximal_independent_masks(&adjacency_masks(&graph));
        let k = self.cfg.constraint.arity();
        let pin_sets: Vec<Vec<usize>> = match &self.cfg.pins {
            PinSelection::Combinations => tuples(&open_pin_candidates(&layout), k, false),
            PinSelection::Permutations => tuples(&open_pin_candidates(&layout), k, true),
            PinSelection::Explicit(sets) => {
                let open = open_pin_candidates(&layout);
                sets.iter()
                    .filter_map(|s| s.iter().map(|&c| layout.index_of(c)).collect::<Option<Vec<_>>>())
                    .filter(|p| p.iter().all(|v| open.contains(v)))
                    .collect()
            }
        };
        for pins in pin_sets {
            let targets = TargetSets::new(&mis, &pins, &self.cfg.constraint);
            if targets.choice_count() == 0 {
                continue;
            }
            let mut groups = targets.groups().to_vec();
            groups.sort_by_key(Vec::len);
            let outside: Vec<u64> = mis
                .iter()
                .copied()
                .filter(|&m| !self.cfg.constraint.contains(project_mask(m, &pins)))
                .collect();
            let mut ctx = Choice { n, pins: &pins, groups: &groups, outside, chosen: Vec::new(), leaves: 0, best: None };
            if let Err(e) = self.choose(&mut ctx) {
                self.pending.push_back(Err(e));
            }
            if let Some((_, weights)) = ctx.best {
                if let Some(g) = self.build(&layout, &weights, &pins) {
                    self.pending.push_back(Ok(g));
                }
            }
        }
    }

    fn program(&self, ctx: &Choice, depth: usize) -> WeightProgram {
        let mut others = ctx.outside.clone();
        for g in &ctx.groups[..depth] {
            others.extend(g.iter().copied().filter(|m| !ctx.chosen.contains(m)));
        }
        let mut p = WeightProgram::new(ctx.n, ctx.chosen.clone(), others, self.cfg.weight_cap)
            .with_objective(self.cfg.objective)
            .with_positive(ctx.pins);
        p.node_limit = self.cfg.ilp_node_limit;
        p
    }

    /// Depth-first over target choices, one group at a time. A partial
    /// choice is abandoned once the program restricted to the decided
    /// groups is infeasible.
    fn choose(&mut self, ctx: &mut Choice) -> Result<()> {
        let depth = ctx.chosen.len();
        if ctx.leaves >= self.cfg.max_target_sets {
            return Ok(());
        }
        if depth > 0 && depth < ctx.groups.len() {
            self.programs_solved += 1;
            if !self.program(ctx, depth).feasible()? {
                return Ok(());
            }
        }
        if depth == ctx.groups.len() {
            ctx.leaves += 1;
            self.programs_solved += 1;
            if let Some(sol) = self.program(ctx, depth).solve()? {
                let score = match self.cfg.objective {
                    Objective::Sum => sol.weights.iter().sum::<i64>(),
                    Objective::Max => sol.weights.iter().max().copied().unwrap_or(0) * 1000 + sol.weights.iter().sum::<i64>(),
                };
                let key = (score, sol.energy);
                if ctx.best.as_ref().map_or(true, |(b, _)| key < *b) {
                    ctx.best = Some((key, sol.weights));
                }
            }
            return Ok(());
        }
        for i in 0..ctx.groups[depth].len() {
            ctx.chosen.push(ctx.groups[depth][i]);
            let r = self.choose(ctx);
            ctx.chosen.pop();
            r?;
        }
        Ok(())
    }

    /// Drops zero-weight sites and certifies; `None` if a pin is dropped or
    /// certification fails.
    fn build(&self, layout: &GridLayout, weights: &[i64], pins: &[usize]) -> Option<Gadget> {
        if pins.iter().any(|&p| weights[p] == 0) {
            return None;
        }
        let keep: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0).collect();
        let reduced = GridLayout::from_weighted_coords(
            layout.family,
            keep.iter().map(|&i| (layout.sites()[i].coord, weights[i])),
        )
        .ok()?;
        let new_pins = pins.iter().map(|p| keep.iter().position(|k| k == p).unwrap()).collect();
        let g = Gadget::from_layout(reduced, new_pins, self.cfg.constraint.clone()).ok()?;
        g.certify().ok.then_some(g)
    }
}

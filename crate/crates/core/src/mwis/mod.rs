//! Exact maximal-independent-set enumeration and maximum-weight
//! independent set solving. Every other module is checked against these.

mod maximal;
mod solver;
mod sweep;

pub use maximal::{
    adjacency_masks, maximal_independent_masks, maximal_independent_sets, sort_lexicographic,
    DEFAULT_ENUMERATION_CAP,
};
pub use solver::{solve, Mode, MwisSolution, SolverConfig};
pub use sweep::{frontier_width, layout_order, solve_layout, sweep_mwis, SweepSolution, DEFAULT_STATE_CAP};

use crate::error::Result;
use crate::graph::{Configuration, WeightedGraph};

/// Maximum total weight and every configuration attaining it.
pub fn solve_mwis(g: &WeightedGraph) -> Result<MwisSolution> {
    solve(g, Mode::All, SolverConfig::default())
}

/// Maximum total weight and one optimal configuration.
pub fn solve_mwis_one(g: &WeightedGraph) -> Result<(i64, Configuration)> {
    let mut s = solve(g, Mode::One, SolverConfig::default())?;
    Ok((s.weight, s.solutions.swap_remove(0)))
}

pub fn violation_count(g: &WeightedGraph, c: &Configuration) -> usize {
    g.violation_count(c)
}

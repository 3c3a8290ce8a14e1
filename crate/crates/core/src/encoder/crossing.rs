use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::lattice::{GridCoord, LatticeFamily, LatticeKind};

/// The problem being compiled. Vertex weights live in the graph; an
/// unweighted instance has every weight equal to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceProblem {
    pub graph: WeightedGraph,
}

impl SourceProblem {
    pub fn new(graph: WeightedGraph) -> Result<Self> {
        if graph.n() < 2 {
            return Err(Error::Precondition(format!("source graph has {} vertices, need at least 2", graph.n())));
        }
        Ok(Self { graph })
    }

    pub fn unweighted(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(WeightedGraph::unweighted(n, edges)?)
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.graph.edges().len()
    }

    pub fn weights(&self) -> &[i64] {
        self.graph.weights()
    }

    pub fn is_unweighted(&self) -> bool {
        self.graph.weights().iter().all(|&w| w == 1)
    }
}

/// L-shaped scaffold of one source vertex. Slots and ranges are 1-based.
/// Vertex `v` owns column slot `v + 1` over rows `1..=v + 1` and row slot
/// `v + 1` over columns `v + 1..=n`; the first vertex has no vertical arm
/// and the last none horizontal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyLine {
    pub vertex: usize,
    pub vslot: usize,
    pub vrange: Option<(usize, usize)>,
    pub hslot: usize,
    pub hrange: Option<(usize, usize)>,
}

impl CopyLine {
    /// Grid cell where the two arms meet.
    pub fn corner(&self) -> (usize, usize) {
        (self.vslot, self.hslot)
    }
}

/// A cell where the vertical arm of `vertical` meets the horizontal arm of
/// `horizontal`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingSite {
    /// Column slot, equal to `vertical + 1`.
    pub col: usize,
    /// Row slot, equal to `horizontal + 1`.
    pub row: usize,
    pub vertical: usize,
    pub horizontal: usize,
    pub has_edge: bool,
}

impl CrossingSite {
    /// The vertical arm starts in this cell rather than passing through it.
    pub fn is_top(&self) -> bool {
        self.row == 1
    }

    /// The horizontal arm ends in this cell.
    pub fn is_right(&self, n: usize) -> bool {
        self.col == n
    }

    /// Whether the cell needs a gadget. Boundary cells without an edge are
    /// resolved by letting the arm stop short instead.
    pub fn needs_tile(&self, n: usize) -> bool {
        self.has_edge || !(self.is_top() || self.is_right(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireSite {
    pub coord: GridCoord,
    pub vertex: usize,
    pub weight: i64,
}

/// Copy lines drawn on the cell grid before any gadget is substituted.
/// Crossing cells hold two wire sites at the same coordinate, which is the
/// defect the replacement step repairs.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingLattice {
    pub family: LatticeFamily,
    pub n: usize,
    pub cell_size: i64,
    pub lines: Vec<CopyLine>,
    pub crossings: Vec<CrossingSite>,
    pub wire_sites: Vec<WireSite>,
}

pub fn cell_size(kind: LatticeKind) -> i64 {
    match kind {
        LatticeKind::Triangular => 6,
        LatticeKind::King => 4,
    }
}

impl CrossingLattice {
    /// Grid coordinate of the centre of cell `(col, row)`.
    pub fn cell_center(&self, col: usize, row: usize) -> GridCoord {
        GridCoord::new(self.cell_size * col as i64, self.cell_size * row as i64)
    }

    pub fn crossing(&self, col: usize, row: usize) -> Option<&CrossingSite> {
        if row == 0 || row >= col || col > self.n {
            return None;
        }
        // row-major over the lower triangle
        let idx = (col - 1) * (col - 2) / 2 + (row - 1);
        self.crossings.get(idx)
    }

    pub fn edge_crossings(&self) -> usize {
        self.crossings.iter().filter(|c| c.has_edge).count()
    }
}

pub fn build_crossing_lattice(p: &SourceProblem, family: LatticeFamily) -> CrossingLattice {
    let n = p.n();
    let s = cell_size(family.kind);
    let lines = (0..n)
        .map(|v| {
            let k = v + 1;
            CopyLine {
                vertex: v,
                vslot: k,
                vrange: (k > 1).then_some((1, k)),
                hslot: k,
                hrange: (k < n).then_some((k, n)),
            }
        })
        .collect();
    let mut crossings = Vec::with_capacity(n * (n - 1) / 2);
    for col in 2..=n {
        for row in 1..col {
            crossings.push(CrossingSite {
                col,
                row,
                vertical: col - 1,
                horizontal: row - 1,
                has_edge: p.graph.has_edge(col - 1, row - 1),
            });
        }
    }
    let mut wire_sites = Vec::new();
    for v in 0..n {
        let k = v as i64 + 1;
        let mut coords: Vec<GridCoord> = (s..=s * k).map(|y| GridCoord::new(s * k, y)).collect();
        coords.extend((s * k + 1..=s * n as i64).map(|x| GridCoord::new(x, s * k)));
        let last = coords.len() - 1;
        wire_sites.extend(coords.into_iter().enumerate().map(|(i, coord)| WireSite {
            coord,
            vertex: v,
            weight: if i == 0 || i == last { 1 } else { 2 },
        }));
    }
    CrossingLattice {
        family,
        n,
        cell_size: s,
        lines,
        crossings,
        wire_sites,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> SourceProblem {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        SourceProblem::unweighted(n, edges).unwrap()
    }

    #[test]
    fn k4_slot_table() {
        let cl = build_crossing_lattice(&complete(4), LatticeFamily::triangular());
        assert_eq!(cl.lines[0].vrange, None);
        assert_eq!(cl.lines[0].hrange, Some((1, 4)));
        assert_eq!(cl.lines[3].vrange, Some((1, 4)));
        assert_eq!(cl.lines[3].hrange, None);
        assert_eq!(cl.lines[1].vrange, Some((1, 2)));
        assert_eq!(cl.lines[1].hrange, Some((2, 4)));
        assert_eq!(cl.crossings.len(), 6);
        assert!(cl.crossings.iter().all(|c| c.has_edge));
    }

    #[test]
    fn k2_has_one_edge_crossing() {
        let cl = build_crossing_lattice(&complete(2), LatticeFamily::king());
        assert_eq!(cl.lines.len(), 2);
        assert_eq!(cl.crossings.len(), 1);
        assert!(cl.crossings[0].has_edge);
        assert_eq!(cl.cell_size, 4);
    }

    #[test]
    fn k23_counts() {
        let p = SourceProblem::unweighted(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        let cl = build_crossing_lattice(&p, LatticeFamily::triangular());
        assert_eq!(cl.lines.len(), 5);
        assert_eq!(cl.crossings.len(), 10);
        assert_eq!(cl.edge_crossings(), 6);
    }

    #[test]
    fn crossing_lookup_matches_storage() {
        let cl = build_crossing_lattice(&complete(5), LatticeFamily::triangular());
        for c in &cl.crossings {
            assert_eq!(cl.crossing(c.col, c.row), Some(c));
        }
        assert!(cl.crossing(3, 3).is_none());
    }

    #[test]
    fn naive_wires_have_odd_length() {
        let cl = build_crossing_lattice(&complete(4), LatticeFamily::triangular());
        for v in 0..4 {
            let len = cl.wire_sites.iter().filter(|w| w.vertex == v).count();
            assert_eq!(len % 2, 1, "vertex {v}");
        }
    }

    #[test]
    fn rejects_single_vertex() {
        assert!(SourceProblem::unweighted(1, []).is_err());
    }
}

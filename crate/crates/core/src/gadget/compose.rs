use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::lattice::{GridLayout, Site};

use super::{Gadget, LogicalConstraint};

/// Merge pin pairs `(p of g1, q of g2)` into single vertices carrying the
/// sum of both weights.
///
/// Vertices keep `g1`'s indices; the unmerged vertices of `g2` follow in
/// order. Pins are those of `g1` followed by the unmerged pins of `g2`, and
/// the constraint is the conjunction of both. When both gadgets carry
/// layouts in a shared coordinate frame, merged pins must coincide and the
/// combined unit-disk graph may contain no edge outside `E₁ ∪ E₂`.
pub fn compose(g1: &Gadget, g2: &Gadget, merges: &[(usize, usize)]) -> Result<Gadget> {
    let (n1, n2) = (g1.graph.n(), g2.graph.n());
    let mut map2: Vec<Option<usize>> = vec![None; n2];
    let mut used1 = BTreeSet::new();
    for &(p, q) in merges {
        if !g1.pins.contains(&p) || !g2.pins.contains(&q) {
            return Err(Error::Precondition(format!("merge ({p}, {q}) is not a pair of pins")));
        }
        if !used1.insert(p) || map2[q].is_some() {
            return Err(Error::Precondition(format!("pin in merge ({p}, {q}) is merged twice")));
        }
        map2[q] = Some(p);
    }
    let mut next = n1;
    let map2: Vec<usize> = map2
        .into_iter()
        .map(|m| {
            m.unwrap_or_else(|| {
                next += 1;
                next - 1
            })
        })
        .collect();

    let mut weights = g1.graph.weights().to_vec();
    weights.resize(next, 0);
    for q in 0..n2 {
        weights[map2[q]] += g2.graph.weight(q);
    }
    let mut edges: BTreeSet<(usize, usize)> = g1.graph.edges().iter().copied().collect();
    for &(a, b) in g2.graph.edges() {
        let (a, b) = (map2[a], map2[b]);
        edges.insert((a.min(b), a.max(b)));
    }
    let graph = WeightedGraph::new(weights, edges.iter().copied())?;

    let k1 = g1.pins.len();
    let mut pins = g1.pins.clone();
    let mut b_map = Vec::with_capacity(g2.pins.len());
    for &q in &g2.pins {
        let v = map2[q];
        match g1.pins.iter().position(|&p| p == v) {
            Some(i) if v < n1 => b_map.push(i),
            _ => {
                b_map.push(pins.len());
                pins.push(v);
            }
        }
    }
    let a_map: Vec<usize> = (0..k1).collect();
    let constraint = LogicalConstraint::conjunction(&g1.constraint, &a_map, &g2.constraint, &b_map, pins.len())
        .ok_or_else(|| Error::Precondition("conjunction is unsatisfiable, trivial or too wide".into()))?;

    let layout = match (&g1.layout, &g2.layout) {
        (Some(l1), Some(l2)) if l1.family == l2.family => Some(merge_layouts(l1, l2, &map2, &graph, &edges)?),
        _ => None,
    };

    let mut out = Gadget::new(graph, pins, constraint)?;
    out.layout = layout;
    let cert = out.certify();
    if !cert.ok {
        return Err(Error::Precondition(format!("composite gadget {cert}")));
    }
    Ok(out)
}

fn merge_layouts(
    l1: &GridLayout,
    l2: &GridLayout,
    map2: &[usize],
    graph: &WeightedGraph,
    edges: &BTreeSet<(usize, usize)>,
) -> Result<GridLayout> {
    let n1 = l1.len();
    let mut sites: Vec<Site> = l1.sites().to_vec();
    for (q, s) in l2.sites().iter().enumerate() {
        let v = map2[q];
        if v < n1 {
            if sites[v].coord != s.coord {
                return Err(Error::Geometry(format!(
                    "merged pins sit at ({}, {}) and ({}, {})",
                    sites[v].coord.x, sites[v].coord.y, s.coord.x, s.coord.y
                )));
            }
        } else {
            sites.push(*s);
        }
    }
    for (v, s) in sites.iter_mut().enumerate() {
        s.weight = graph.weight(v);
    }
    let layout = GridLayout::new(l1.family, sites).map_err(|e| Error::Geometry(e.to_string()))?;
    let derived: BTreeSet<_> = layout.derive_edges().into_iter().collect();
    if let Some(&(a, b)) = derived.symmetric_difference(edges).next() {
        return Err(Error::Geometry(format!(
            "merged layout {} edge ({a}, {b})",
            if derived.contains(&(a, b)) { "adds" } else { "lacks" }
        )));
    }
    Ok(layout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{GridCoord, LatticeFamily};

    fn not_at(a: (i64, i64), b: (i64, i64)) -> Gadget {
        let l = GridLayout::from_weighted_coords(
            LatticeFamily::triangular(),
            [(GridCoord::new(a.0, a.1), 1), (GridCoord::new(b.0, b.1), 1)],
        )
        .unwrap();
        Gadget::from_layout(l, vec![0, 1], LogicalConstraint::not()).unwrap()
    }

    #[test]
    fn double_negation() {
        let g = compose(&not_at((0, 0), (0, 1)), &not_at((0, 1), (0, 2)), &[(1, 0)]).unwrap();
        assert_eq!(g.graph.weights(), [1, 2, 1]);
        let outer = g.constraint.project_onto(&[0, 2]).unwrap();
        assert_eq!(outer, LogicalConstraint::copy());
    }

    #[test]
    fn unintended_edge_is_rejected() {
        // the second NOT bends back next to the first one's free end
        let e = compose(&not_at((0, 0), (0, 1)), &not_at((0, 1), (1, 0)), &[(1, 0)]).unwrap_err();
        assert!(matches!(e, Error::Geometry(_)));
    }
}

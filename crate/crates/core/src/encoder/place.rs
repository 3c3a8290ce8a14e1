use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::lattice::{GridCoord, GridLayout, LatticeFamily};

use super::crossing::CrossingLattice;
use super::library::TileLibrary;
use super::route::{route, Region};

/// A library tile translated into a crossing cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedTile {
    pub col: usize,
    pub row: usize,
    pub has_edge: bool,
    pub origin: GridCoord,
    pub energy: i64,
    pub sites: Vec<(GridCoord, i64)>,
    /// Left, top, right, bottom.
    pub pins: [GridCoord; 4],
    pub edges: Vec<(GridCoord, GridCoord)>,
}

/// One source vertex realised as a sequence of copy chains joined through
/// tile pins. Every chain is an induced path with an even number of steps,
/// so its endpoints and every second site carry the vertex value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wire {
    pub vertex: usize,
    /// Tile pin the wire starts on when no chain precedes it.
    pub lead: Option<GridCoord>,
    pub chains: Vec<Vec<GridCoord>>,
    /// Tile pin the wire ends on when no chain follows it.
    pub tail: Option<GridCoord>,
}

impl Wire {
    /// Sites carrying the vertex value, in wire order without repeats.
    pub fn value_sites(&self) -> Vec<GridCoord> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut push = |c: GridCoord| {
            if seen.insert(c) {
                out.push(c);
            }
        };
        if let Some(c) = self.lead {
            push(c);
        }
        for ch in &self.chains {
            for c in ch.iter().step_by(2) {
                push(*c);
            }
        }
        if let Some(c) = self.tail {
            push(c);
        }
        out
    }

    pub fn steps(&self) -> usize {
        self.chains.iter().map(|c| c.len() - 1).sum()
    }
}

/// Gadget tiles and copy chains on the lattice, before the source weights
/// are applied. Site weights are the sums of the gadget weights meeting at
/// each site; a chain step is a two-site gadget of weight 1 per end.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub family: LatticeFamily,
    pub n: usize,
    pub tiles: Vec<PlacedTile>,
    pub wires: Vec<Wire>,
}

impl Placement {
    pub fn site_weights(&self) -> BTreeMap<GridCoord, i64> {
        let mut w = BTreeMap::new();
        for t in &self.tiles {
            for &(c, x) in &t.sites {
                *w.entry(c).or_insert(0) += x;
            }
        }
        for wire in &self.wires {
            if let Some(c) = wire.lead {
                w.entry(c).or_insert(0);
            }
            for ch in &wire.chains {
                for (i, &c) in ch.iter().enumerate() {
                    *w.entry(c).or_insert(0) += (i > 0) as i64 + (i + 1 < ch.len()) as i64;
                }
            }
        }
        w
    }

    /// Optimal weight of the unshifted instance: the sum of the parts.
    pub fn energy(&self) -> i64 {
        self.tiles.iter().map(|t| t.energy).sum::<i64>() + self.wires.iter().map(|w| w.steps() as i64).sum::<i64>()
    }

    pub fn site_count(&self) -> usize {
        self.site_weights().len()
    }

    /// Sites ordered by coordinate, which is the vertex order of the layout.
    pub fn layout(&self) -> Result<GridLayout> {
        GridLayout::from_weighted_coords(self.family, self.site_weights())
    }

    pub fn intended_edges(&self) -> BTreeSet<(GridCoord, GridCoord)> {
        let norm = |a: GridCoord, b: GridCoord| if a < b { (a, b) } else { (b, a) };
        let mut out = BTreeSet::new();
        for t in &self.tiles {
            out.extend(t.edges.iter().map(|&(a, b)| norm(a, b)));
        }
        for w in &self.wires {
            for ch in &w.chains {
                out.extend(ch.windows(2).map(|p| norm(p[0], p[1])));
            }
        }
        out
    }

    fn tile_pins(&self) -> HashSet<GridCoord> {
        self.tiles.iter().flat_map(|t| t.pins).collect()
    }

    /// Checks that the unit-disk graph of the sites has exactly the intended
    /// edges and that every chain has an even number of steps.
    pub fn check_geometry(&self) -> Result<()> {
        let layout = self.layout()?;
        let coords: Vec<GridCoord> = layout.coords().collect();
        let derived: BTreeSet<_> = layout.derive_edges().into_iter().map(|(u, v)| (coords[u], coords[v])).collect();
        let intended = self.intended_edges();
        if let Some(e) = derived.symmetric_difference(&intended).next() {
            let kind = if derived.contains(e) { "stray" } else { "missing" };
            return Err(Error::Geometry(format!(
                "{kind} adjacency between ({}, {}) and ({}, {})",
                e.0.x, e.0.y, e.1.x, e.1.y
            )));
        }
        for w in &self.wires {
            if let Some(ch) = w.chains.iter().find(|c| c.len() % 2 == 0) {
                return Err(Error::Geometry(format!(
                    "wire of vertex {} has a chain of {} sites",
                    w.vertex,
                    ch.len()
                )));
            }
        }
        Ok(())
    }
}

/// Where a wire begins or ends.
#[derive(Clone, Copy, Debug)]
enum End {
    Free(GridCoord),
    Pin(GridCoord),
}

/// Substitutes a library gadget for every crossing cell that needs one,
/// then joins the gadget pins of each vertex with copy chains found by a
/// bounded search for induced paths.
pub fn replace_gadgets(cl: &CrossingLattice, lib: &TileLibrary) -> Result<Placement> {
    if lib.family.kind != cl.family.kind {
        return Err(Error::Precondition(format!(
            "library is for the {} lattice, crossing lattice for {}",
            lib.family.kind, cl.family.kind
        )));
    }
    let n = cl.n;
    let s = cl.cell_size;
    let x = |col: usize| s * col as i64;
    let y = |row: usize| s * row as i64;

    let mut tiles = Vec::new();
    let mut tile_at = BTreeMap::new();
    for c in cl.crossings.iter().filter(|c| c.needs_tile(n)) {
        let t = lib.tile(c.has_edge).map_err(|e| match e {
            Error::LibraryMiss { signature } => Error::LibraryMiss {
                signature: format!("{signature} at cell ({}, {})", c.col, c.row),
            },
            e => e,
        })?;
        let origin = GridCoord::new(x(c.col) - t.top().x, y(c.row) - t.left().y);
        if origin.x < 0 || origin.y < 0 {
            return Err(Error::Geometry(format!("tile for cell ({}, {}) leaves the grid", c.col, c.row)));
        }
        let shift = |p: GridCoord| p.offset(origin.x, origin.y);
        tile_at.insert((c.col, c.row), tiles.len());
        tiles.push(PlacedTile {
            col: c.col,
            row: c.row,
            has_edge: c.has_edge,
            origin,
            energy: t.energy(),
            sites: t.sites.iter().map(|&(p, w)| (shift(p), w)).collect(),
            pins: t.pins.map(shift),
            edges: t.edges.iter().map(|&(a, b)| (shift(a), shift(b))).collect(),
        });
    }

    let mut occupied: HashSet<GridCoord> = HashSet::new();
    let mut owner: BTreeMap<GridCoord, usize> = BTreeMap::new();
    for (k, t) in tiles.iter().enumerate() {
        for &(c, _) in &t.sites {
            if let Some(&j) = owner.get(&c) {
                if !(t.pins.contains(&c) && tiles[j].pins.contains(&c)) {
                    return Err(Error::Geometry(format!(
                        "tiles at cells ({}, {}) and ({}, {}) overlap at ({}, {})",
                        tiles[j].col, tiles[j].row, t.col, t.row, c.x, c.y
                    )));
                }
            }
            owner.insert(c, k);
            occupied.insert(c);
        }
    }

    // Free ends stop short of the boundary cell they would otherwise enter.
    let (drop, inset) = (s / 2, 2);
    let mut plans: Vec<(usize, End, Vec<(GridCoord, GridCoord)>, End)> = Vec::with_capacity(n);
    for v in 0..n {
        let k = v + 1;
        let mut passes = Vec::new();
        for row in 1..k {
            if let Some(&t) = tile_at.get(&(k, row)) {
                passes.push((tiles[t].pins[1], tiles[t].pins[3]));
            }
        }
        for col in k + 1..=n {
            if let Some(&t) = tile_at.get(&(col, k)) {
                passes.push((tiles[t].pins[0], tiles[t].pins[2]));
            }
        }
        let start = if k == 1 {
            End::Free(GridCoord::new(x(1), y(1)))
        } else if tile_at.contains_key(&(k, 1)) {
            End::Pin(passes[0].0)
        } else {
            let c = GridCoord::new(x(k), y(1) + drop);
            if passes.first().is_some_and(|p| p.0 == c) {
                End::Pin(c)
            } else {
                End::Free(c)
            }
        };
        let end = if k == n {
            End::Free(GridCoord::new(x(n), y(n)))
        } else if tile_at.contains_key(&(n, k)) {
            End::Pin(passes.last().unwrap().1)
        } else {
            let c = GridCoord::new(x(n) - inset, y(k));
            if passes.last().is_some_and(|p| p.1 == c) {
                End::Pin(c)
            } else {
                End::Free(c)
            }
        };
        for e in [start, end] {
            if let End::Free(c) = e {
                if !occupied.insert(c) {
                    return Err(Error::Geometry(format!("free end of vertex {v} lands on ({}, {})", c.x, c.y)));
                }
            }
        }
        plans.push((v, start, passes, end));
    }

    let mut wires = Vec::with_capacity(n);
    for (v, start, passes, end) in plans {
        let mut hops = Vec::new();
        let mut cur = match start {
            End::Free(c) => Some(c),
            End::Pin(_) => None,
        };
        for (i, &(entry, exit)) in passes.iter().enumerate() {
            if let Some(c) = cur {
                hops.push((c, entry));
            } else {
                debug_assert_eq!(i, 0);
            }
            cur = Some(exit);
        }
        if let End::Free(e) = end {
            hops.push((cur.expect("a wire without passes starts free"), e));
        }
        let mut chains = Vec::with_capacity(hops.len());
        for (a, b) in hops {
            let path = [1, 2, 3]
                .iter()
                .find_map(|&m| route(cl.family, &occupied, a, b, Region::around(a, b, m), 2 * s))
                .ok_or_else(|| {
                    Error::Geometry(format!(
                        "no parity-preserving route for vertex {v} from ({}, {}) to ({}, {})",
                        a.x, a.y, b.x, b.y
                    ))
                })?;
            occupied.extend(path.iter().copied());
            chains.push(path);
        }
        wires.push(Wire {
            vertex: v,
            lead: match start {
                End::Pin(c) => Some(c),
                End::Free(_) => None,
            },
            chains,
            tail: match end {
                End::Pin(c) => Some(c),
                End::Free(_) => None,
            },
        });
    }

    let p = Placement {
        family: cl.family,
        n,
        tiles,
        wires,
    };
    p.check_geometry()?;
    Ok(p)
}

/// Shortens free wire ends two sites at a time. A chain end is free when it
/// is not a gadget pin. A wire touching no gadget collapses to one site.
/// Each shortening removes one copy gadget pair and keeps the parity of
/// every remaining chain, so the result computes the same relation.
pub fn trim(p: &Placement) -> Placement {
    let pins = p.tile_pins();
    let mut out = p.clone();
    for w in &mut out.wires {
        let last = w.chains.len() - 1;
        if w.chains.len() == 1 && w.lead.is_none() && w.tail.is_none() {
            let ch = &mut w.chains[0];
            if !pins.contains(&ch[0]) && !pins.contains(&ch[ch.len() - 1]) {
                ch.truncate(1);
                continue;
            }
        }
        let first = &mut w.chains[0];
        if !pins.contains(&first[0]) {
            while first.len() >= 3 {
                first.drain(..2);
            }
        }
        let end = &mut w.chains[last];
        if !pins.contains(&end[end.len() - 1]) {
            while end.len() >= 3 {
                end.truncate(end.len() - 2);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::crossing::{build_crossing_lattice, SourceProblem};
    use crate::lattice::LatticeKind;

    fn placed(kind: LatticeKind, n: usize, edges: &[(usize, usize)]) -> Placement {
        let p = SourceProblem::unweighted(n, edges.iter().copied()).unwrap();
        let fam = LatticeFamily::of(kind);
        replace_gadgets(&build_crossing_lattice(&p, fam), &TileLibrary::builtin(kind)).unwrap()
    }

    #[test]
    fn k2_is_one_edge_tile_with_two_chains() {
        let p = placed(LatticeKind::Triangular, 2, &[(0, 1)]);
        assert_eq!(p.tiles.len(), 1);
        assert!(p.tiles[0].has_edge);
        assert_eq!(p.wires[0].tail, Some(p.tiles[0].pins[2]));
        assert_eq!(p.wires[1].lead, Some(p.tiles[0].pins[1]));
        let t = trim(&p);
        assert_eq!(t.site_count(), 9);
        assert_eq!(t.energy(), 7);
    }

    #[test]
    fn dangling_tail_loses_pairs() {
        let p = placed(LatticeKind::Triangular, 3, &[(1, 2)]);
        let t = trim(&p);
        for (a, b) in p.wires.iter().zip(&t.wires) {
            assert_eq!(a.chains.len(), b.chains.len());
            let before: usize = a.chains.iter().map(Vec::len).sum();
            let after: usize = b.chains.iter().map(Vec::len).sum();
            assert_eq!((before - after) % 2, 0);
        }
        assert!(t.site_count() < p.site_count());
        t.check_geometry().unwrap();
    }

    #[test]
    fn trim_is_idempotent() {
        let p = placed(LatticeKind::King, 4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let once = trim(&p);
        assert_eq!(trim(&once), once);
    }

    #[test]
    fn chains_are_odd_and_geometry_is_exact() {
        for kind in [LatticeKind::Triangular, LatticeKind::King] {
            let p = placed(kind, 5, &[(0, 1), (0, 4), (2, 3), (1, 3)]);
            assert!(p.wires.iter().flat_map(|w| &w.chains).all(|c| c.len() % 2 == 1));
            p.check_geometry().unwrap();
        }
    }

    #[test]
    fn stray_site_is_caught() {
        let mut p = placed(LatticeKind::Triangular, 3, &[(0, 1)]);
        let c = p.wires[0].chains[0][1];
        let stray = p.family.neighbors(c).find(|nb| !p.site_weights().contains_key(nb)).unwrap();
        p.tiles[0].sites.push((stray, 1));
        assert!(matches!(p.check_geometry(), Err(Error::Geometry(_))));
    }

    #[test]
    fn wrong_library_family_is_rejected() {
        let p = SourceProblem::unweighted(2, [(0, 1)]).unwrap();
        let cl = build_crossing_lattice(&p, LatticeFamily::triangular());
        assert!(replace_gadgets(&cl, &TileLibrary::builtin(LatticeKind::King)).is_err());
    }
}

//! Induced paths between two fixed sites that touch nothing else.

use std::collections::HashSet;

use crate::lattice::{GridCoord, LatticeFamily};

const NODE_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Region {
    pub lo: GridCoord,
    pub hi: GridCoord,
}

impl Region {
    pub fn around(a: GridCoord, b: GridCoord, margin: i64) -> Self {
        Self {
            lo: GridCoord::new((a.x.min(b.x) - margin).max(0), (a.y.min(b.y) - margin).max(0)),
            hi: GridCoord::new(a.x.max(b.x) + margin, a.y.max(b.y) + margin),
        }
    }

    fn contains(&self, c: GridCoord) -> bool {
        (self.lo.x..=self.hi.x).contains(&c.x) && (self.lo.y..=self.hi.y).contains(&c.y)
    }
}

/// Shortest path from `a` to `b` with an even number of steps, at most
/// `extra` steps longer than the lattice distance, whose interior sites are
/// free, pairwise non-adjacent except along the path, and adjacent to no
/// occupied site other than their path neighbours `a` and `b`. Both
/// endpoints are expected to be in `occupied`. Returns the full path
/// including the endpoints.
pub(crate) fn route(
    family: LatticeFamily,
    occupied: &HashSet<GridCoord>,
    a: GridCoord,
    b: GridCoord,
    region: Region,
    extra: i64,
) -> Option<Vec<GridCoord>> {
    if a == b {
        return Some(vec![a]);
    }
    let d = family.hop_distance(a, b);
    let mut len = d + d % 2;
    let mut router = Router {
        family,
        occupied,
        b,
        region,
        nodes: 0,
        path: vec![a],
    };
    while len <= d + extra {
        if router.extend(len) {
            router.path.push(b);
            return Some(router.path);
        }
        if router.nodes > NODE_BUDGET {
            return None;
        }
        len += 2;
    }
    None
}

struct Router<'a> {
    family: LatticeFamily,
    occupied: &'a HashSet<GridCoord>,
    b: GridCoord,
    region: Region,
    nodes: u64,
    path: Vec<GridCoord>,
}

impl Router<'_> {
    /// Extends the path by `remaining` steps ending at `b`.
    fn extend(&mut self, remaining: i64) -> bool {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return false;
        }
        let cur = *self.path.last().unwrap();
        if remaining == 1 {
            return self.family.are_adjacent(cur, self.b);
        }
        let mut next: Vec<GridCoord> = self
            .family
            .neighbors(cur)
            .filter(|&v| self.admissible(cur, v, remaining - 1))
            .collect();
        next.sort_by_key(|&v| (self.family.hop_distance(v, self.b), v.y, v.x));
        for v in next {
            self.path.push(v);
            if self.extend(remaining - 1) {
                return true;
            }
            self.path.pop();
        }
        false
    }

    fn admissible(&self, cur: GridCoord, v: GridCoord, left: i64) -> bool {
        if v.x < 0 || v.y < 0 || !self.region.contains(v) || self.occupied.contains(&v) || self.path.contains(&v) {
            return false;
        }
        if self.family.hop_distance(v, self.b) > left {
            return false;
        }
        self.family.neighbors(v).all(|u| {
            if u == cur {
                true
            } else if u == self.b {
                left == 1
            } else {
                !self.occupied.contains(&u) && !self.path.contains(&u)
            }
        })
    }
}

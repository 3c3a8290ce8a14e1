//! Candidate graphs from Boolean masks over a rectangular lattice patch.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::lattice::{GridCoord, GridLayout, LatticeFamily, LatticeKind};

/// Patch cells are bounded by this many sites.
pub const MAX_PATCH_SITES: usize = 16;

/// One occupancy mask; bit `y * cols + x` marks site `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchMask {
    pub rows: usize,
    pub cols: usize,
    pub mask: u32,
}

impl PatchMask {
    pub fn coords(&self) -> Vec<GridCoord> {
        (0..self.rows * self.cols)
            .filter(|i| self.mask >> i & 1 == 1)
            .map(|i| GridCoord::new((i % self.cols) as i64, (i / self.cols) as i64))
            .collect()
    }

    pub fn count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn layout(&self, family: LatticeFamily) -> GridLayout {
        GridLayout::from_weighted_coords(family, self.coords().into_iter().map(|c| (c, 1)))
            .expect("mask coordinates are distinct and non-negative")
    }
}

/// Canonical form of a site set under lattice translations, rotations and
/// reflections: the lexicographically smallest normalized coordinate list
/// over the point group.
pub fn canonical_key(kind: LatticeKind, coords: &[GridCoord]) -> Vec<(i64, i64)> {
    let images: Vec<Vec<(i64, i64)>> = match kind {
        LatticeKind::King => (0..8)
            .map(|t| {
                coords
                    .iter()
                    .map(|c| {
                        let (x, y) = (c.x, c.y);
                        match t {
                            0 => (x, y),
                            1 => (-y, x),
                            2 => (-x, -y),
                            3 => (y, -x),
                            4 => (-x, y),
                            5 => (y, x),
                            6 => (x, -y),
                            _ => (-y, -x),
                        }
                    })
                    .collect()
            })
            .collect(),
        LatticeKind::Triangular => {
            // axial coordinates on the basis e1 = (√3/2, ½), e2 = (0, 1)
            let axial: Vec<(i64, i64)> = coords
                .iter()
                .map(|c| {
                    let v = 2 * c.y + c.x.rem_euclid(2);
                    (c.x, (v - c.x) / 2)
                })
                .collect();
            let rot = |(a, b): (i64, i64)| (-b, a + b);
            let refl = |(a, b): (i64, i64)| (a, -a - b);
            let mut out = Vec::with_capacity(12);
            for flip in [false, true] {
                let mut pts: Vec<(i64, i64)> = if flip { axial.iter().map(|&p| refl(p)).collect() } else { axial.clone() };
                for _ in 0..6 {
                    out.push(
                        pts.iter()
                            .map(|&(a, b)| {
                                let v = a + 2 * b;
                                (a, (v - a.rem_euclid(2)).div_euclid(2))
                            })
                            .collect(),
                    );
                    pts = pts.iter().map(|&p| rot(p)).collect();
                }
            }
            out
        }
    };
    images
        .into_iter()
        .map(|pts| normalize(kind, pts))
        .min()
        .unwrap_or_default()
}

/// Translate so that the minimum column is 0 (by a lattice vector) and then
/// the minimum row is 0, and sort.
fn normalize(kind: LatticeKind, mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    let Some(minx) = pts.iter().map(|p| p.0).min() else { return pts };
    if kind == LatticeKind::Triangular && minx.rem_euclid(2) == 1 {
        // odd column shift: (x, y) -> (x - 1, y + (x mod 2)) keeps the lattice
        pts = pts.iter().map(|&(x, y)| (x - 1, y + x.rem_euclid(2))).collect();
    }
    let minx = pts.iter().map(|p| p.0).min().unwrap();
    let miny = pts.iter().map(|p| p.1).min().unwrap();
    let mut pts: Vec<_> = pts.into_iter().map(|(x, y)| (x - minx, y - miny)).collect();
    pts.sort_unstable();
    pts
}

fn connected(kind: LatticeKind, coords: &[GridCoord]) -> bool {
    if coords.is_empty() {
        return false;
    }
    let set: HashSet<_> = coords.iter().copied().collect();
    let fam = LatticeFamily::of(kind);
    let mut seen = HashSet::from([coords[0]]);
    let mut stack = vec![coords[0]];
    while let Some(c) = stack.pop() {
        for n in fam.neighbors(c) {
            if set.contains(&n) && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen.len() == coords.len()
}

/// Every non-empty mask of a `rows × cols` patch whose unit-disk graph is
/// connected, one representative per symmetry class, ordered by site count
/// and then by mask value.
pub fn generate_patch_graphs(family: LatticeFamily, rows: usize, cols: usize, stream_cap: u64) -> Result<Vec<PatchMask>> {
    patch_masks(family, rows, cols, stream_cap, true)
}

/// Like [`generate_patch_graphs`], optionally keeping every symmetric copy.
pub fn patch_masks(family: LatticeFamily, rows: usize, cols: usize, stream_cap: u64, dedup: bool) -> Result<Vec<PatchMask>> {
    patch_masks_sized(family, rows, cols, 1..=rows * cols, 0, stream_cap, dedup)
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i as u64 + 1))
}

/// Masks with a site count in `sizes` that contain every bit of `required`.
/// Patches up to [`MAX_PATCH_SITES`] sites may be enumerated in full; larger
/// patches (up to 24 sites) are allowed when the number of masks in the
/// size window fits the stream cap.
pub fn patch_masks_sized(
    family: LatticeFamily,
    rows: usize,
    cols: usize,
    sizes: std::ops::RangeInclusive<usize>,
    required: u32,
    stream_cap: u64,
    dedup: bool,
) -> Result<Vec<PatchMask>> {
    let sites = rows * cols;
    if rows == 0 || cols == 0 {
        return Err(Error::Precondition("patch dimensions must be positive".into()));
    }
    if sites > 24 {
        return Err(Error::Budget(format!("patch {rows}x{cols} has {sites} sites, more than 24")));
    }
    let fixed = required.count_ones() as usize;
    let lo = (*sizes.start()).max(1).max(fixed);
    let hi = (*sizes.end()).min(sites);
    let total: u64 = (lo..=hi).map(|k| binomial(sites - fixed, k - fixed)).fold(0, u64::saturating_add);
    if sites > MAX_PATCH_SITES && total > stream_cap {
        return Err(Error::Budget(format!(
            "patch {rows}x{cols} has {sites} sites, more than {MAX_PATCH_SITES}, and {total} masks in the size window exceed the stream cap of {stream_cap}"
        )));
    }
    if sites <= MAX_PATCH_SITES && (1u64 << sites) > stream_cap {
        return Err(Error::Budget(format!("2^{sites} masks exceed the stream cap of {stream_cap}")));
    }
    let free: Vec<u32> = (0..sites as u32).filter(|b| required >> b & 1 == 0).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for k in lo..=hi {
        let mut masks: Vec<u32> = Vec::new();
        for_each_subset(&free, k - fixed, &mut |m| masks.push(m | required));
        masks.sort_unstable();
        for mask in masks {
            let pm = PatchMask { rows, cols, mask };
            let coords = pm.coords();
            if !connected(family.kind, &coords) {
                continue;
            }
            if !dedup || seen.insert(canonical_key(family.kind, &coords)) {
                out.push(pm);
            }
        }
    }
    Ok(out)
}

fn for_each_subset(bits: &[u32], k: usize, f: &mut impl FnMut(u32)) {
    fn rec(bits: &[u32], k: usize, acc: u32, f: &mut impl FnMut(u32)) {
        if k == 0 {
            f(acc);
            return;
        }
        for i in 0..bits.len() {
            if bits.len() - i < k {
                break;
            }
            rec(&bits[i + 1..], k - 1, acc | 1 << bits[i], f);
        }
    }
    rec(bits, k, 0, f)
}

/// Sites with an empty lattice neighbour position that is reachable from
/// outside the layout through empty positions; external wires can attach
/// there without passing through the interior.
pub fn open_pin_candidates(layout: &GridLayout) -> Vec<usize> {
    let Some((lo, hi)) = layout.bounding_box() else { return Vec::new() };
    let occupied: HashSet<_> = layout.coords().collect();
    let (x0, y0, x1, y1) = (lo.x - 2, lo.y - 2, hi.x + 2, hi.y + 2);
    let inside = |c: GridCoord| c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1;
    let start = GridCoord::new(x0, y0);
    let mut exterior = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(c) = stack.pop() {
        // 4-connected moves plus the lattice stencil so diagonal gaps count
        let step = [(0, 1), (0, -1), (1, 0), (-1, 0)];
        let nbrs = step
            .iter()
            .map(|&(dx, dy)| c.offset(dx, dy))
            .chain(layout.family.neighbors(c));
        for n in nbrs.collect::<Vec<_>>() {
            if inside(n) && !occupied.contains(&n) && exterior.insert(n) {
                stack.push(n);
            }
        }
    }
    layout
        .sites()
        .iter()
        .enumerate()
        .filter(|(_, s)| layout.family.neighbors(s.coord).any(|n| exterior.contains(&n)))
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_patches() {
        let tri = LatticeFamily::triangular();
        assert_eq!(generate_patch_graphs(tri, 1, 1, 1 << 16).unwrap().len(), 1);
        let one_by_two = generate_patch_graphs(tri, 1, 2, 1 << 16).unwrap();
        assert_eq!(one_by_two.len(), 2);
        let two_by_two = generate_patch_graphs(tri, 2, 2, 1 << 16).unwrap();
        assert!(two_by_two.iter().any(|m| m.count() == 4));
        assert!(generate_patch_graphs(tri, 5, 4, 1 << 19).is_err());
        assert!(generate_patch_graphs(tri, 5, 5, u64::MAX).is_err());
        assert!(generate_patch_graphs(tri, 4, 4, 1 << 10).is_err());
    }

    #[test]
    fn sized_window_on_a_large_patch() {
        let tri = LatticeFamily::triangular();
        let all = patch_masks_sized(tri, 4, 5, 12..=12, 0b11, 1 << 20, false).unwrap();
        assert!(!all.is_empty());
        assert!(all.iter().all(|m| m.count() == 12 && m.mask & 0b11 == 0b11));
        assert!(patch_masks_sized(tri, 4, 5, 12..=12, 0, 1000, false).is_err());
    }

    #[test]
    fn canonical_key_respects_lattice_symmetry() {
        let k = LatticeKind::Triangular;
        let c = |v: &[(i64, i64)]| v.iter().map(|&(x, y)| GridCoord::new(x, y)).collect::<Vec<_>>();
        // a horizontal pair and a vertical pair are both single edges
        assert_eq!(canonical_key(k, &c(&[(0, 0), (1, 0)])), canonical_key(k, &c(&[(3, 5), (3, 6)])));
        // a zigzag row of three bends by 120 degrees like this column turn
        assert_eq!(
            canonical_key(k, &c(&[(0, 0), (1, 0), (2, 0)])),
            canonical_key(k, &c(&[(0, 0), (0, 1), (1, 1)]))
        );
        assert_ne!(
            canonical_key(k, &c(&[(0, 0), (1, 0), (2, 0)])),
            canonical_key(k, &c(&[(0, 0), (0, 1), (0, 2)]))
        );
        // a triangle is not a path
        assert_ne!(
            canonical_key(k, &c(&[(0, 0), (0, 1), (1, 0)])),
            canonical_key(k, &c(&[(0, 0), (0, 1), (0, 2)]))
        );
    }

    #[test]
    fn open_pins() {
        let tri = LatticeFamily::triangular();
        let full = PatchMask { rows: 3, cols: 3, mask: 0x1ff }.layout(tri);
        let open = open_pin_candidates(&full);
        let center = full.index_of(GridCoord::new(1, 1)).unwrap();
        assert_eq!(open.len(), 8);
        assert!(!open.contains(&center));
        let single = PatchMask { rows: 1, cols: 1, mask: 1 }.layout(tri);
        assert_eq!(open_pin_candidates(&single), vec![0]);
        let row = PatchMask { rows: 1, cols: 3, mask: 0b111 }.layout(tri);
        assert_eq!(open_pin_candidates(&row), vec![0, 1, 2]);
    }
}

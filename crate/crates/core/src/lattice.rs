//! Triangular and King's lattices on a square-grid index space.
//!
//! Grid coordinates are canonical. Physical coordinates are always derived:
//! on the triangular lattice odd columns sit half a spacing lower and
//! columns are `√3/2` spacings apart, so a row of the grid is a zigzag and a
//! column is a straight line.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Relative tolerance for every distance comparison.
pub const GEOM_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridCoord {
    pub x: i64,
    pub y: i64,
}

impl GridCoord {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn offset(self, dx: i64, dy: i64) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalCoord {
    pub x: f64,
    pub y: f64,
}

impl PhysicalCoord {
    pub fn distance(self, other: PhysicalCoord) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Triangular,
    King,
}

impl std::str::FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "triangular" | "tri" | "tlsg" => Ok(Self::Triangular),
            "king" | "ksg" => Ok(Self::King),
            other => Err(Error::Parse(format!("unknown lattice family {other:?}"))),
        }
    }
}

impl std::fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Triangular => "triangular",
            Self::King => "king",
        })
    }
}

/// A lattice family with its extreme edge / non-edge distances in units of
/// the spacing `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeFamily {
    pub kind: LatticeKind,
    pub r_max: f64,
    pub r_min_nonadjacent: f64,
}

impl LatticeFamily {
    pub fn triangular() -> Self {
        Self {
            kind: LatticeKind::Triangular,
            r_max: 1.0,
            r_min_nonadjacent: 3f64.sqrt(),
        }
    }

    pub fn king() -> Self {
        Self {
            kind: LatticeKind::King,
            r_max: 2f64.sqrt(),
            r_min_nonadjacent: 2.0,
        }
    }

    pub fn of(kind: LatticeKind) -> Self {
        match kind {
            LatticeKind::Triangular => Self::triangular(),
            LatticeKind::King => Self::king(),
        }
    }

    /// `Q = R_min / r_max` and `Q⁶`, the interaction-scale separation under
    /// a `1/r⁶` tail.
    pub fn quality_metrics(&self) -> (f64, f64) {
        let q = self.r_min_nonadjacent / self.r_max;
        (q, q.powi(6))
    }

    pub fn to_physical(&self, c: GridCoord, a: f64) -> PhysicalCoord {
        to_physical(c, self.kind, a)
    }

    /// Grid offsets of the lattice neighbours of `c`.
    pub fn neighbor_offsets(&self, c: GridCoord) -> &'static [(i64, i64)] {
        neighbor_offsets(self.kind, c)
    }

    pub fn neighbors(&self, c: GridCoord) -> impl Iterator<Item = GridCoord> + '_ {
        self.neighbor_offsets(c).iter().map(move |&(dx, dy)| c.offset(dx, dy))
    }

    pub fn are_adjacent(&self, a: GridCoord, b: GridCoord) -> bool {
        self.neighbor_offsets(a).iter().any(|&(dx, dy)| a.offset(dx, dy) == b)
    }

    /// Number of lattice steps between two sites.
    pub fn hop_distance(&self, a: GridCoord, b: GridCoord) -> i64 {
        match self.kind {
            LatticeKind::King => (a.x - b.x).abs().max((a.y - b.y).abs()),
            LatticeKind::Triangular => {
                // odd columns sit half a step lower, so convert to axial form
                let axial = |c: GridCoord| (c.x, c.y - (c.x - c.x.rem_euclid(2)) / 2);
                let (q1, r1) = axial(a);
                let (q2, r2) = axial(b);
                let (dq, dr) = (q1 - q2, r1 - r2);
                (dq.abs() + dr.abs() + (dq + dr).abs()) / 2
            }
        }
    }
}

const TRI_EVEN: [(i64, i64); 6] = [(0, -1), (0, 1), (-1, 0), (1, 0), (-1, -1), (1, -1)];
const TRI_ODD: [(i64, i64); 6] = [(0, -1), (0, 1), (-1, 0), (1, 0), (-1, 1), (1, 1)];
const KING: [(i64, i64); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

pub fn neighbor_offsets(kind: LatticeKind, c: GridCoord) -> &'static [(i64, i64)] {
    match kind {
        LatticeKind::Triangular if c.x.rem_euclid(2) == 0 => &TRI_EVEN,
        LatticeKind::Triangular => &TRI_ODD,
        LatticeKind::King => &KING,
    }
}

/// Grid-to-physical transform, `a` is the lattice spacing.
pub fn to_physical(c: GridCoord, kind: LatticeKind, a: f64) -> PhysicalCoord {
    match kind {
        LatticeKind::Triangular => PhysicalCoord {
            x: 3f64.sqrt() / 2.0 * a * c.x as f64,
            y: a * (c.y as f64 + 0.5 * c.x.rem_euclid(2) as f64),
        },
        LatticeKind::King => PhysicalCoord {
            x: a * c.x as f64,
            y: a * c.y as f64,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Site {
    #[serde(flatten)]
    pub coord: GridCoord,
    pub weight: i64,
}

/// Weighted sites on a lattice. Site order is significant: it is the vertex
/// order of the derived graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GridLayout {
    pub family: LatticeFamily,
    /// Physical spacing in μm, set once a simulation needs it.
    pub unit: Option<f64>,
    sites: Vec<Site>,
}

impl GridLayout {
    pub fn new(family: LatticeFamily, sites: Vec<Site>) -> Result<Self> {
        let mut seen = HashMap::with_capacity(sites.len());
        for (i, s) in sites.iter().enumerate() {
            if s.weight < 1 {
                return Err(Error::InvalidLayout(format!(
                    "site {i} at ({}, {}) has weight {} < 1",
                    s.coord.x, s.coord.y, s.weight
                )));
            }
            if s.coord.x < 0 || s.coord.y < 0 {
                return Err(Error::InvalidLayout(format!(
                    "site {i} at negative coordinate ({}, {})",
                    s.coord.x, s.coord.y
                )));
            }
            if let Some(j) = seen.insert(s.coord, i) {
                return Err(Error::InvalidLayout(format!(
                    "sites {j} and {i} share coordinate ({}, {})",
                    s.coord.x, s.coord.y
                )));
            }
        }
        Ok(Self {
            family,
            unit: None,
            sites,
        })
    }

    /// Drops zero-weight entries before validating.
    pub fn from_weighted_coords(family: LatticeFamily, sites: impl IntoIterator<Item = (GridCoord, i64)>) -> Result<Self> {
        Self::new(
            family,
            sites
                .into_iter()
                .filter(|(_, w)| *w != 0)
                .map(|(coord, weight)| Site { coord, weight })
                .collect(),
        )
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn coords(&self) -> impl Iterator<Item = GridCoord> + '_ {
        self.sites.iter().map(|s| s.coord)
    }

    pub fn weights(&self) -> Vec<i64> {
        self.sites.iter().map(|s| s.weight).collect()
    }

    pub fn index_of(&self, c: GridCoord) -> Option<usize> {
        self.sites.iter().position(|s| s.coord == c)
    }

    pub fn physical(&self, a: f64) -> Vec<PhysicalCoord> {
        self.sites.iter().map(|s| self.family.to_physical(s.coord, a)).collect()
    }

    /// Unit-disk edges: pairs whose physical distance is at most `r_max·a`
    /// up to [`GEOM_EPS`]. Independent of `a`, so unit spacing is used.
    pub fn derive_edges(&self) -> Vec<(usize, usize)> {
        let pos = self.physical(1.0);
        let cutoff = self.family.r_max * (1.0 + GEOM_EPS);
        let mut edges = Vec::new();
        for i in 0..pos.len() {
            for j in i + 1..pos.len() {
                if pos[i].distance(pos[j]) <= cutoff {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    /// Same edge set computed from the neighbour stencil on grid coordinates.
    pub fn stencil_edges(&self) -> Vec<(usize, usize)> {
        let index: HashMap<_, _> = self.sites.iter().enumerate().map(|(i, s)| (s.coord, i)).collect();
        let mut edges = Vec::new();
        for (i, s) in self.sites.iter().enumerate() {
            for c in self.family.neighbors(s.coord) {
                if let Some(&j) = index.get(&c) {
                    if j > i {
                        edges.push((i, j));
                    }
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    pub fn to_graph(&self) -> WeightedGraph {
        WeightedGraph::new(self.weights(), self.stencil_edges()).expect("layout invariants give a valid graph")
    }

    pub fn bounding_box(&self) -> Option<(GridCoord, GridCoord)> {
        let xs = self.sites.iter().map(|s| s.coord.x);
        let ys = self.sites.iter().map(|s| s.coord.y);
        Some((
            GridCoord::new(xs.clone().min()?, ys.clone().min()?),
            GridCoord::new(xs.max()?, ys.max()?),
        ))
    }

    /// Renders sites as discs shaded by weight (darker is heavier); sites
    /// listed in `framed` get a red outline.
    pub fn to_svg(&self, framed: &[usize]) -> String {
        let scale = 40.0;
        let r = 11.0;
        let pos = self.physical(1.0);
        let (maxx, maxy) = pos
            .iter()
            .fold((0f64, 0f64), |(mx, my), p| (mx.max(p.x), my.max(p.y)));
        let wmax = self.sites.iter().map(|s| s.weight).max().unwrap_or(1).max(1) as f64;
        let width = maxx * scale + 2.0 * scale;
        let height = maxy * scale + 2.0 * scale;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let px = |p: PhysicalCoord| (p.x * scale + scale, p.y * scale + scale);
        for (u, v) in self.stencil_edges() {
            let (x1, y1) = px(pos[u]);
            let (x2, y2) = px(pos[v]);
            let _ = writeln!(
                out,
                r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#999999" stroke-width="1.5"/>"##
            );
        }
        for (i, s) in self.sites.iter().enumerate() {
            let (cx, cy) = px(pos[i]);
            let shade = (235.0 - 200.0 * s.weight as f64 / wmax).round() as u8;
            let stroke = if framed.contains(&i) { "#d62728" } else { "#333333" };
            let sw = if framed.contains(&i) { 3.0 } else { 1.0 };
            let text = if shade < 130 { "white" } else { "black" };
            let _ = writeln!(
                out,
                r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r}" fill="#{shade:02x}{shade:02x}{shade:02x}" stroke="{stroke}" stroke-width="{sw}"/>"##
            );
            let _ = writeln!(
                out,
                r#"<text x="{cx:.2}" y="{:.2}" font-size="10" text-anchor="middle" fill="{text}">{}</text>"#,
                cy + 3.5,
                s.weight
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
struct LayoutRecord {
    family: LatticeKind,
    unit: Option<f64>,
    sites: Vec<Site>,
}

impl Serialize for GridLayout {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LayoutRecord {
            family: self.family.kind,
            unit: self.unit,
            sites: self.sites.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GridLayout {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rec = LayoutRecord::deserialize(deserializer)?;
        let mut layout = GridLayout::new(LatticeFamily::of(rec.family), rec.sites).map_err(serde::de::Error::custom)?;
        layout.unit = rec.unit;
        Ok(layout)
    }
}

/// Occupancy count per grid row, handy in debug output.
pub fn ascii_art(layout: &GridLayout) -> String {
    let Some((lo, hi)) = layout.bounding_box() else {
        return String::new();
    };
    let weights: BTreeMap<_, _> = layout.sites().iter().map(|s| (s.coord, s.weight)).collect();
    let mut out = String::new();
    for y in lo.y..=hi.y {
        for x in lo.x..=hi.x {
            match weights.get(&GridCoord::new(x, y)) {
                Some(w) if *w < 10 => out.push_str(&format!("{w} ")),
                Some(_) => out.push_str("# "),
                None => out.push_str(". "),
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: PhysicalCoord, x: f64, y: f64) -> bool {
        (a.x - x).abs() < 1e-12 && (a.y - y).abs() < 1e-12
    }

    #[test]
    fn physical_transform() {
        let t = LatticeKind::Triangular;
        assert!(close(to_physical(GridCoord::new(0, 0), t, 1.0), 0.0, 0.0));
        assert!(close(to_physical(GridCoord::new(1, 0), t, 1.0), 3f64.sqrt() / 2.0, 0.5));
        assert!(close(to_physical(GridCoord::new(2, 3), t, 2.0), 2.0 * 3f64.sqrt(), 6.0));
        assert!(close(to_physical(GridCoord::new(2, 3), LatticeKind::King, 2.0), 4.0, 6.0));
    }

    fn layout(kind: LatticeKind, coords: &[(i64, i64)]) -> GridLayout {
        GridLayout::from_weighted_coords(
            LatticeFamily::of(kind),
            coords.iter().map(|&(x, y)| (GridCoord::new(x, y), 1)),
        )
        .unwrap()
    }

    #[test]
    fn unit_disk_edges() {
        assert_eq!(layout(LatticeKind::Triangular, &[(0, 0), (1, 0)]).derive_edges(), vec![(0, 1)]);
        assert_eq!(
            layout(LatticeKind::Triangular, &[(0, 0), (0, 1), (1, 0)]).derive_edges(),
            vec![(0, 1), (0, 2), (1, 2)]
        );
        assert_eq!(
            layout(LatticeKind::King, &[(0, 0), (1, 1), (0, 2)]).derive_edges(),
            vec![(0, 1), (1, 2)]
        );
    }

    #[test]
    fn quality_factors() {
        let (q, q6) = LatticeFamily::triangular().quality_metrics();
        assert!((q - 3f64.sqrt()).abs() < 1e-12 && (q6 - 27.0).abs() < 1e-12);
        let (q, q6) = LatticeFamily::king().quality_metrics();
        assert!((q - 2f64.sqrt()).abs() < 1e-12 && (q6 - 8.0).abs() < 1e-12);
        let degenerate = LatticeFamily {
            kind: LatticeKind::King,
            r_max: 1.5,
            r_min_nonadjacent: 1.5,
        };
        assert_eq!(degenerate.quality_metrics(), (1.0, 1.0));
    }

    #[test]
    fn rejects_duplicates_and_zero_weights() {
        let fam = LatticeFamily::triangular();
        let s = |x, y, weight| Site {
            coord: GridCoord::new(x, y),
            weight,
        };
        assert!(GridLayout::new(fam, vec![s(0, 0, 1), s(0, 0, 2)]).is_err());
        assert!(GridLayout::new(fam, vec![s(0, 0, 0)]).is_err());
        let l = GridLayout::from_weighted_coords(fam, [(GridCoord::new(0, 0), 0), (GridCoord::new(1, 0), 2)]).unwrap();
        assert_eq!(l.len(), 1);
    }

    #[test]
    fn json_schema() {
        let l = layout(LatticeKind::Triangular, &[(0, 0), (1, 2)]);
        let v: serde_json::Value = serde_json::to_value(&l).unwrap();
        assert_eq!(v["family"], "triangular");
        assert_eq!(v["sites"][1]["x"], 1);
        assert_eq!(v["sites"][1]["y"], 2);
        assert_eq!(v["sites"][1]["weight"], 1);
        let back: GridLayout = serde_json::from_value(v).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn hop_distance_agrees_with_breadth_first_search() {
        for fam in [LatticeFamily::triangular(), LatticeFamily::king()] {
            let origin = GridCoord::new(6, 6);
            let mut dist = HashMap::from([(origin, 0i64)]);
            let mut frontier = vec![origin];
            for d in 1..=5 {
                let mut next = Vec::new();
                for c in frontier {
                    for nb in fam.neighbors(c) {
                        if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(nb) {
                            e.insert(d);
                            next.push(nb);
                        }
                    }
                }
                frontier = next;
            }
            for (&c, &d) in &dist {
                assert_eq!(fam.hop_distance(origin, c), d, "{:?} {c:?}", fam.kind);
                assert_eq!(fam.hop_distance(c, origin), d);
            }
        }
    }
}

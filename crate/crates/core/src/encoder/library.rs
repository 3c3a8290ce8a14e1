use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadget::{Gadget, GadgetRecord, LogicalConstraint};
use crate::lattice::{GridCoord, LatticeFamily, LatticeKind};

const BUILTIN: &str = include_str!("../../data/tiles.json");

/// A crossing gadget with its pins in the order left, top, right, bottom.
/// Left/right carry the horizontal wire, top/bottom the vertical one.
#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    pub gadget: Gadget,
    pub has_edge: bool,
    pub sites: Vec<(GridCoord, i64)>,
    pub pins: [GridCoord; 4],
    pub edges: Vec<(GridCoord, GridCoord)>,
}

impl Tile {
    fn new(gadget: Gadget, family: LatticeFamily, has_edge: bool) -> Result<Self> {
        let sig = signature(family.kind, has_edge);
        let layout = gadget
            .layout
            .as_ref()
            .ok_or_else(|| Error::Parse(format!("{sig} gadget has no layout")))?;
        if layout.family.kind != family.kind {
            return Err(Error::Parse(format!("{sig} gadget is on the {} lattice", layout.family.kind)));
        }
        if gadget.constraint != LogicalConstraint::crossing(has_edge, false, false) {
            return Err(Error::Parse(format!("{sig} gadget has the wrong truth table")));
        }
        let coords: Vec<GridCoord> = layout.coords().collect();
        let pins = [0, 1, 2, 3].map(|i| coords[gadget.pins[i]]);
        if family.kind == LatticeKind::Triangular && pins[1].x % 2 != 0 {
            return Err(Error::Parse(format!("{sig} gadget has its top pin on an odd column")));
        }
        let edges = layout
            .stencil_edges()
            .into_iter()
            .map(|(u, v)| (coords[u], coords[v]))
            .collect();
        let sites = layout.sites().iter().map(|s| (s.coord, s.weight)).collect();
        Ok(Self {
            gadget,
            has_edge,
            sites,
            pins,
            edges,
        })
    }

    pub fn energy(&self) -> i64 {
        self.gadget.mwis_energy
    }

    pub fn left(&self) -> GridCoord {
        self.pins[0]
    }

    pub fn top(&self) -> GridCoord {
        self.pins[1]
    }

    pub fn right(&self) -> GridCoord {
        self.pins[2]
    }

    pub fn bottom(&self) -> GridCoord {
        self.pins[3]
    }
}

pub fn signature(kind: LatticeKind, has_edge: bool) -> String {
    format!("{kind}/{}", if has_edge { "crossing-with-edge" } else { "crossing" })
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct FamilyRecords {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    crossing: Option<GadgetRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    crossing_with_edge: Option<GadgetRecord>,
}

/// Gadgets available to the encoder for one lattice family.
#[derive(Debug, Clone, PartialEq)]
pub struct TileLibrary {
    pub family: LatticeFamily,
    crossing: Option<Tile>,
    crossing_with_edge: Option<Tile>,
}

impl TileLibrary {
    pub fn builtin(kind: LatticeKind) -> Self {
        Self::from_json(BUILTIN, kind).expect("bundled tile library is valid")
    }

    /// Reads the `kind` entry of a library file. A missing entry is not an
    /// error here; lookups report it.
    pub fn from_json(text: &str, kind: LatticeKind) -> Result<Self> {
        let all: BTreeMap<LatticeKind, FamilyRecords> = serde_json::from_str(text)?;
        let recs = all.get(&kind).cloned().unwrap_or_default();
        let family = LatticeFamily::of(kind);
        let load = |r: &Option<GadgetRecord>, edge: bool| -> Result<Option<Tile>> {
            r.as_ref()
                .map(|r| Tile::new(Gadget::from_record(r)?, family, edge))
                .transpose()
        };
        Ok(Self {
            family,
            crossing: load(&recs.crossing, false)?,
            crossing_with_edge: load(&recs.crossing_with_edge, true)?,
        })
    }

    pub fn from_gadgets(family: LatticeFamily, crossing: Option<Gadget>, crossing_with_edge: Option<Gadget>) -> Result<Self> {
        Ok(Self {
            family,
            crossing: crossing.map(|g| Tile::new(g, family, false)).transpose()?,
            crossing_with_edge: crossing_with_edge.map(|g| Tile::new(g, family, true)).transpose()?,
        })
    }

    pub fn to_json(&self) -> String {
        let recs = FamilyRecords {
            crossing: self.crossing.as_ref().map(|t| t.gadget.to_record()),
            crossing_with_edge: self.crossing_with_edge.as_ref().map(|t| t.gadget.to_record()),
        };
        let all = BTreeMap::from([(self.family.kind, recs)]);
        serde_json::to_string_pretty(&all).expect("records serialize")
    }

    pub fn tile(&self, has_edge: bool) -> Result<&Tile> {
        let t = if has_edge { &self.crossing_with_edge } else { &self.crossing };
        t.as_ref().ok_or_else(|| Error::LibraryMiss {
            signature: signature(self.family.kind, has_edge),
        })
    }

    pub fn tiles(&self) -> impl Iterator<Item = &Tile> {
        self.crossing.iter().chain(self.crossing_with_edge.iter())
    }
}

//! Gadget search: candidate unit-disk graphs on lattice patches, pin
//! selection, target-set choice and integer weight programs, followed by
//! certification. Also composition of certified gadgets.

mod certify;
mod compose;
mod constraint;
mod ilp;
mod patch;
mod search;
mod target;

pub use certify::{certify, Certificate};
pub use compose::compose;
pub use constraint::{LogicalConstraint, MAX_ARITY};
pub use ilp::{formulate_and_solve, Objective, WeightProgram, WeightSolution, DEFAULT_NODE_LIMIT, DEFAULT_WEIGHT_CAP};
pub use patch::{canonical_key, generate_patch_graphs, open_pin_candidates, patch_masks, patch_masks_sized, PatchMask, MAX_PATCH_SITES};
pub use search::{search, PinSelection, Search, SearchConfig};
pub use target::{project_mask, select_target_sets, TargetSets};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::lattice::{GridCoord, GridLayout, LatticeFamily, LatticeKind};
use crate::mwis::solve_mwis_one;

/// A weighted graph whose optimal independent sets, projected onto the
/// pins, are exactly the satisfying assignments of its constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct Gadget {
    pub graph: WeightedGraph,
    pub layout: Option<GridLayout>,
    pub pins: Vec<usize>,
    pub constraint: LogicalConstraint,
    pub mwis_energy: i64,
}

impl Gadget {
    /// Builds a gadget and records its optimal weight. Not certified.
    pub fn new(graph: WeightedGraph, pins: Vec<usize>, constraint: LogicalConstraint) -> Result<Self> {
        if pins.len() != constraint.arity() {
            return Err(Error::Precondition(format!(
                "{} pins for a constraint of arity {}",
                pins.len(),
                constraint.arity()
            )));
        }
        if let Some(&p) = pins.iter().find(|&&p| p >= graph.n()) {
            return Err(Error::Precondition(format!("pin {p} is not a vertex")));
        }
        let mut sorted = pins.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != pins.len() {
            return Err(Error::Precondition("pins are not distinct".into()));
        }
        let (mwis_energy, _) = solve_mwis_one(&graph)?;
        Ok(Self { graph, layout: None, pins, constraint, mwis_energy })
    }

    pub fn from_layout(layout: GridLayout, pins: Vec<usize>, constraint: LogicalConstraint) -> Result<Self> {
        let mut g = Self::new(layout.to_graph(), pins, constraint)?;
        g.layout = Some(layout);
        Ok(g)
    }

    pub fn arity(&self) -> usize {
        self.pins.len()
    }

    pub fn certify(&self) -> Certificate {
        certify(self)
    }

    pub fn to_record(&self) -> GadgetRecord {
        GadgetRecord {
            family: self.layout.as_ref().map(|l| l.family.kind),
            mask: self
                .layout
                .as_ref()
                .map(|l| l.coords().map(|c| [c.x, c.y]).collect()),
            edges: self.layout.is_none().then(|| self.graph.edges().to_vec()),
            pins: self.pins.clone(),
            weights: self.graph.weights().to_vec(),
            constraint: self.constraint.clone(),
            mwis_energy: self.mwis_energy,
        }
    }

    pub fn from_record(r: &GadgetRecord) -> Result<Self> {
        let g = match (&r.mask, r.family) {
            (Some(mask), Some(kind)) => {
                if mask.len() != r.weights.len() {
                    return Err(Error::Parse("mask and weights differ in length".into()));
                }
                let layout = GridLayout::from_weighted_coords(
                    LatticeFamily::of(kind),
                    mask.iter().zip(&r.weights).map(|(c, &w)| (GridCoord::new(c[0], c[1]), w)),
                )?;
                if layout.len() != mask.len() {
                    return Err(Error::Parse("zero weight in gadget record".into()));
                }
                Self::from_layout(layout, r.pins.clone(), r.constraint.clone())?
            }
            _ => {
                let edges = r.edges.clone().ok_or_else(|| Error::Parse("record has neither mask nor edges".into()))?;
                Self::new(WeightedGraph::new(r.weights.clone(), edges)?, r.pins.clone(), r.constraint.clone())?
            }
        };
        if g.mwis_energy != r.mwis_energy {
            return Err(Error::Parse(format!(
                "record says energy {} but the graph has {}",
                r.mwis_energy, g.mwis_energy
            )));
        }
        Ok(g)
    }
}

/// Persistent form of a gadget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<LatticeKind>,
    /// Site coordinates `[x, y]` in vertex order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<Vec<[i64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize)>>,
    pub pins: Vec<usize>,
    pub weights: Vec<i64>,
    pub constraint: LogicalConstraint,
    pub mwis_energy: i64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn not_gadget_certifies() {
        let g = Gadget::new(WeightedGraph::unweighted(2, [(0, 1)]).unwrap(), vec![0, 1], LogicalConstraint::not()).unwrap();
        assert!(g.certify().ok);
        let skew = Gadget::new(WeightedGraph::new(vec![1, 2], [(0, 1)]).unwrap(), vec![0, 1], LogicalConstraint::not()).unwrap();
        let c = skew.certify();
        assert!(!c.ok);
        assert_eq!(c.missing.len(), 1);
        assert_eq!(c.missing[0].to_string(), "10");
    }

    #[test]
    fn record_round_trip() {
        let layout = GridLayout::from_weighted_coords(
            LatticeFamily::triangular(),
            [(GridCoord::new(0, 0), 1), (GridCoord::new(0, 1), 2), (GridCoord::new(0, 2), 1)],
        )
        .unwrap();
        let g = Gadget::from_layout(layout, vec![0, 2], LogicalConstraint::copy()).unwrap();
        assert!(g.certify().ok);
        let json = serde_json::to_string(&g.to_record()).unwrap();
        let back = Gadget::from_record(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, g);
        let bare = Gadget::new(g.graph.clone(), vec![0, 2], LogicalConstraint::copy()).unwrap();
        let back = Gadget::from_record(&bare.to_record()).unwrap();
        assert_eq!(back, bare);
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{GridLayout, LatticeKind, PhysicalCoord};

use super::pulse::{DEFAULT_C6, DEFAULT_OMEGA_MAX};

/// Largest atom count handled by the dense state vector.
pub const MAX_ATOMS: usize = 18;

/// Physical constants of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomParams {
    pub c6: f64,
    /// Peak Rabi frequency; fixes the blockade radius.
    pub omega_max: f64,
    /// Layout weight that receives the full global detuning. When unset it
    /// is the larger of 2 and the heaviest layout weight, so no atom is
    /// detuned beyond `Δmax`.
    pub detuning_unit: Option<f64>,
}

impl Default for AtomParams {
    fn default() -> Self {
        Self {
            c6: DEFAULT_C6,
            omega_max: DEFAULT_OMEGA_MAX,
            detuning_unit: None,
        }
    }
}

impl AtomParams {
    /// Distance at which the interaction equals the peak Rabi frequency.
    pub fn blockade_radius(&self) -> f64 {
        (self.c6 / self.omega_max).powf(1.0 / 6.0)
    }

    /// Lattice spacing placing the blockade radius between the longest edge
    /// and the shortest non-edge.
    pub fn spacing(&self, kind: LatticeKind) -> f64 {
        let rb = self.blockade_radius();
        match kind {
            LatticeKind::Triangular => 3f64.powf(-0.25) * rb,
            LatticeKind::King => 2f64.powf(-0.75) * rb,
        }
    }
}

/// Atoms with positions in μm and relative detuning weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RydbergInstance {
    pub positions: Vec<PhysicalCoord>,
    pub detuning_weights: Vec<f64>,
    pub c6: f64,
}

impl RydbergInstance {
    pub fn new(positions: Vec<PhysicalCoord>, detuning_weights: Vec<f64>, c6: f64) -> Result<Self> {
        if positions.len() != detuning_weights.len() {
            return Err(Error::Precondition("one detuning weight per atom is required".into()));
        }
        if positions.is_empty() {
            return Err(Error::Precondition("no atoms".into()));
        }
        if positions.len() > MAX_ATOMS {
            return Err(Error::SizeCap { atoms: positions.len(), cap: MAX_ATOMS });
        }
        for i in 0..positions.len() {
            for j in 0..i {
                if positions[i].distance(positions[j]) <= 0.0 {
                    return Err(Error::Precondition(format!("atoms {j} and {i} coincide")));
                }
            }
        }
        Ok(Self { positions, detuning_weights, c6 })
    }

    /// Places the sites of `layout` at the spacing for its family.
    pub fn from_layout(layout: &GridLayout, params: &AtomParams) -> Result<Self> {
        if layout.len() > MAX_ATOMS {
            return Err(Error::SizeCap { atoms: layout.len(), cap: MAX_ATOMS });
        }
        let a = layout.unit.unwrap_or_else(|| params.spacing(layout.family.kind));
        let unit = params
            .detuning_unit
            .unwrap_or_else(|| layout.sites().iter().map(|s| s.weight).max().unwrap_or(1).max(2) as f64);
        if !(unit > 0.0 && unit.is_finite()) {
            return Err(Error::Precondition(format!("detuning unit {unit} is not positive")));
        }
        let weights = layout.sites().iter().map(|s| s.weight as f64 / unit).collect();
        Self::new(layout.physical(a), weights, params.c6)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// `C₆/r⁶` for every pair, untruncated.
    pub fn interaction(&self, i: usize, j: usize) -> f64 {
        self.c6 / self.positions[i].distance(self.positions[j]).powi(6)
    }
}

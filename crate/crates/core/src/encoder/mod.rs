//! Compilation of weighted independent-set problems into unit-disk layouts.
//!
//! Each source vertex becomes an L-shaped copy line on a grid of cells.
//! Cells where two lines cross receive a crossing gadget, with or without
//! the edge constraint, and the gadget pins of each vertex are joined by
//! chains of even length. Free wire ends are then shortened and the source
//! weights added as small shifts on one site per wire.

mod crossing;
mod library;
mod place;
mod readout;
mod route;

pub use crossing::{build_crossing_lattice, cell_size, CopyLine, CrossingLattice, CrossingSite, SourceProblem, WireSite};
pub use library::{signature, Tile, TileLibrary};
pub use place::{replace_gadgets, trim, PlacedTile, Placement, Wire};
pub use readout::{
    apply_weights, decode, default_epsilon, overhead_estimate, overhead_slot_aware, verify, wires_consistent,
    EncodingResult, VerifyReport,
};

use num_rational::Rational64;

use crate::error::Result;
use crate::lattice::LatticeFamily;

#[derive(Debug, Clone)]
pub struct EncodeOptions {
    pub trim: bool,
    /// Defaults to [`default_epsilon`].
    pub epsilon: Option<Rational64>,
    /// Defaults to the bundled library of the family.
    pub library: Option<TileLibrary>,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        Self {
            trim: true,
            epsilon: None,
            library: None,
        }
    }
}

/// Runs the whole pipeline with the given options.
pub fn encode_with(p: &SourceProblem, family: LatticeFamily, opts: &EncodeOptions) -> Result<EncodingResult> {
    let cl = build_crossing_lattice(p, family);
    let builtin;
    let lib = match &opts.library {
        Some(l) => l,
        None => {
            builtin = TileLibrary::builtin(family.kind);
            &builtin
        }
    };
    let mut placement = replace_gadgets(&cl, lib)?;
    if opts.trim {
        placement = trim(&placement);
        placement.check_geometry()?;
    }
    apply_weights(&placement, p, opts.epsilon.unwrap_or_else(|| default_epsilon(p)))
}

pub fn encode(p: &SourceProblem, family: LatticeFamily) -> Result<EncodingResult> {
    encode_with(p, family, &EncodeOptions::default())
}

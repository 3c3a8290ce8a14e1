pub mod anneal;
pub mod encoder;
pub mod error;
pub mod gadget;
pub mod graph;
pub mod graph6;
pub mod lattice;
pub mod mwis;

pub use error::{Error, Result};
pub use graph::{Configuration, WeightedGraph};

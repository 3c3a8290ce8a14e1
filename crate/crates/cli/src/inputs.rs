use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;
use serde_json::Value;
use tlsg::encoder::{EncodingResult, TileLibrary};
use tlsg::gadget::{Gadget, GadgetRecord, LogicalConstraint};
use tlsg::graph6::from_graph6;
use tlsg::lattice::{GridCoord, GridLayout, LatticeKind};
use tlsg::WeightedGraph;

use crate::Exit;

#[derive(Deserialize)]
struct GraphRecord {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    weights: Option<Vec<i64>>,
}

/// A graph from a file holding graph6 or `{n, edges, weights?}` JSON, or
/// from a graph6 string given directly.
pub fn read_graph(spec: &str) -> Result<WeightedGraph> {
    let path = Path::new(spec);
    let text = if path.is_file() {
        std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?
    } else {
        spec.to_string()
    };
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let r: GraphRecord = serde_json::from_str(trimmed).map_err(|e| Exit::parse(format!("graph {spec}: {e}")))?;
        let weights = r.weights.unwrap_or_else(|| vec![1; r.n]);
        if weights.len() != r.n {
            return Err(Exit::parse(format!("graph {spec}: {} weights for {} vertices", weights.len(), r.n)).into());
        }
        return Ok(WeightedGraph::new(weights, r.edges)?);
    }
    let line = trimmed
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .ok_or_else(|| Exit::parse(format!("graph {spec} is empty")))?;
    Ok(from_graph6(line)?)
}

pub fn parse_weights(spec: &str) -> Result<Vec<i64>> {
    spec.split(',')
        .map(|w| w.trim().parse::<i64>().map_err(|e| Exit::parse(format!("weight {w:?}: {e}")).into()))
        .collect()
}

pub fn parse_family(spec: Option<&str>) -> Result<LatticeKind> {
    Ok(spec.unwrap_or("triangular").parse::<LatticeKind>()?)
}

/// A named gate or a truth-table file: a JSON bit matrix, or one row of
/// `0`/`1` characters per line.
pub fn read_constraint(spec: &str) -> Result<LogicalConstraint> {
    let named = match spec.to_ascii_lowercase().as_str() {
        "not" => Some(LogicalConstraint::not()),
        "copy" => Some(LogicalConstraint::copy()),
        "and" => Some(LogicalConstraint::and()),
        "nand" => Some(LogicalConstraint::nand()),
        "or" => Some(LogicalConstraint::or()),
        "nor" => Some(LogicalConstraint::nor()),
        "xor" => Some(LogicalConstraint::xor()),
        "crossing" => Some(LogicalConstraint::crossing(false, false, false)),
        "crossing-edge" | "crossing-with-edge" => Some(LogicalConstraint::crossing(true, false, false)),
        _ => None,
    };
    if let Some(c) = named {
        return Ok(c);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Exit::parse(format!("constraint {spec:?} is neither a known gate nor a readable file: {e}")))?;
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let rows: Vec<Vec<u8>> = serde_json::from_str(trimmed).map_err(|e| Exit::parse(format!("{spec}: {e}")))?;
        return Ok(LogicalConstraint::from_bit_matrix(&rows)?);
    }
    let rows: Vec<&str> = trimmed.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    Ok(LogicalConstraint::from_strings(&rows)?)
}

/// `"x,y x,y …"` patch coordinates of one pin tuple.
pub fn parse_pin_set(spec: &str) -> Result<Vec<GridCoord>> {
    spec.split_whitespace()
        .map(|p| {
            let (x, y) = p.split_once(',').ok_or_else(|| Exit::parse(format!("pin {p:?} is not x,y")))?;
            let n = |s: &str| s.trim().parse::<i64>().map_err(|e| Exit::parse(format!("pin {p:?}: {e}")));
            Ok(GridCoord::new(n(x)?, n(y)?))
        })
        .collect()
}

/// Strips the provenance wrapper written by this tool, if present.
fn payload(v: Value, key: &str) -> Value {
    match v {
        Value::Object(mut m) if m.contains_key("meta") && m.contains_key(key) => m.remove(key).unwrap_or(Value::Null),
        v => v,
    }
}

fn read_json(path: &str) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    Ok(serde_json::from_str(&text).map_err(|e| Exit::parse(format!("{path}: {e}")))?)
}

pub fn read_encoding(path: &str) -> Result<EncodingResult> {
    let v = payload(read_json(path)?, "encoding");
    Ok(serde_json::from_value(v).map_err(|e| Exit::parse(format!("{path}: not an encoding: {e}")))?)
}

/// A layout from `tile:<family>/<crossing|crossing-edge>`, an encoding, a
/// gadget database (first entry), a gadget record or a bare layout file.
pub fn read_layout(spec: &str) -> Result<GridLayout> {
    if let Some(rest) = spec.strip_prefix("tile:") {
        let (fam, which) = rest.split_once('/').unwrap_or((rest, "crossing"));
        let kind: LatticeKind = fam.parse()?;
        let edge = match which {
            "crossing" => false,
            "crossing-edge" | "crossing-with-edge" => true,
            other => return Err(Exit::parse(format!("unknown tile {other:?}")).into()),
        };
        let tile = TileLibrary::builtin(kind).tile(edge)?.gadget.clone();
        return Ok(tile.layout.expect("bundled tiles carry layouts"));
    }
    let v = read_json(spec)?;
    if let Value::Object(m) = &v {
        if m.contains_key("encoding") {
            return Ok(read_encoding(spec)?.layout);
        }
        if let Some(Value::Array(gs)) = m.get("gadgets") {
            let first = gs.first().ok_or_else(|| Exit::empty(format!("{spec} holds no gadgets")))?;
            return gadget_layout(spec, first.get("record").cloned().unwrap_or(Value::Null));
        }
        if m.contains_key("pin_map") {
            return Ok(read_encoding(spec)?.layout);
        }
        if m.contains_key("constraint") {
            return gadget_layout(spec, v);
        }
    }
    Ok(serde_json::from_value(v).map_err(|e| Exit::parse(format!("{spec}: not a layout: {e}")))?)
}

fn gadget_layout(spec: &str, v: Value) -> Result<GridLayout> {
    let r: GadgetRecord = serde_json::from_value(v).map_err(|e| Exit::parse(format!("{spec}: {e}")))?;
    let g = Gadget::from_record(&r)?;
    g.layout.ok_or_else(|| Exit::parse(format!("{spec}: gadget has no lattice layout")).into())
}

pub fn read_library(path: &str, kind: LatticeKind) -> Result<TileLibrary> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    Ok(TileLibrary::from_json(&text, kind)?)
}

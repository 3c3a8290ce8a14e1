//! The graph6 text format for simple undirected graphs.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

fn push_size(out: &mut String, n: usize) {
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push(((n >> shift & 63) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift & 63) as u8 + 63) as char);
        }
    }
}

/// Encode the edge structure of `g`; weights are not represented.
pub fn to_graph6(g: &WeightedGraph) -> String {
    let n = g.n();
    let mut out = String::new();
    push_size(&mut out, n);
    let mut acc = 0u8;
    let mut bits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            bits += 1;
            if bits == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        out.push(((acc << (6 - bits)) + 63) as char);
    }
    out
}

/// Decode one graph6 line into a unit-weight graph.
pub fn from_graph6(s: &str) -> Result<WeightedGraph> {
    let s = s.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes: Vec<u8> = s.bytes().collect();
    if let Some(b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Parse(format!("graph6 byte {b} out of range")));
    }
    let val = |b: u8| (b - 63) as usize;
    let (n, rest) = match bytes.as_slice() {
        [] => return Err(Error::Parse("empty graph6 string".into())),
        [126, 126, r @ ..] if r.len() >= 6 => (r[..6].iter().fold(0, |a, &b| a << 6 | val(b)), &r[6..]),
        [126, r @ ..] if r.len() >= 3 && r[0] != 126 => (r[..3].iter().fold(0, |a, &b| a << 6 | val(b)), &r[3..]),
        [126, ..] => return Err(Error::Parse("truncated graph6 size".into())),
        [b, r @ ..] => (val(*b), r),
    };
    let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if rest.len() != needed {
        return Err(Error::Parse(format!(
            "graph6 body has {} bytes, expected {needed} for {n} vertices",
            rest.len()
        )));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if val(rest[k / 6]) >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    WeightedGraph::unweighted(n, edges)
}

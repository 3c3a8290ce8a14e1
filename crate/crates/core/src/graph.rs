//! Weighted simple graphs and 0/1 vertex configurations.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Undirected simple graph with strictly positive integer vertex weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    weights: Vec<i64>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl WeightedGraph {
    /// Builds a graph, rejecting self-loops, duplicate edges, out-of-range
    /// endpoints and non-positive weights. Edges are stored normalized as
    /// `(min, max)` and sorted.
    pub fn new(weights: Vec<i64>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = weights.len();
        if let Some((v, w)) = weights.iter().enumerate().find(|(_, w)| **w < 1) {
            return Err(Error::InvalidGraph(format!("vertex {v} has weight {w} < 1")));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Self { weights, edges, adj })
    }

    /// Unit-weight graph.
    pub fn unweighted(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(vec![1; n], edges)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> i64 {
        self.weights[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Same topology with a new weight vector.
    pub fn with_weights(&self, weights: Vec<i64>) -> Result<Self> {
        if weights.len() != self.n() {
            return Err(Error::InvalidGraph(format!(
                "expected {} weights, got {}",
                self.n(),
                weights.len()
            )));
        }
        Self::new(weights, self.edges.iter().copied())
    }

    /// Induced subgraph on `keep` (in the given order); returns the graph and
    /// the map from new to old indices.
    pub fn induced(&self, keep: &[usize]) -> (WeightedGraph, Vec<usize>) {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let weights = keep.iter().map(|&v| self.weights[v]).collect();
        let edges = self
            .edges
            .iter()
            .filter(|(u, v)| index[*u] != usize::MAX && index[*v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        let g = WeightedGraph::new(weights, edges).expect("induced subgraph of a valid graph");
        (g, keep.to_vec())
    }

    /// Total weight of the selected vertices.
    pub fn config_weight(&self, c: &Configuration) -> i64 {
        c.ones().map(|v| self.weights[v]).sum()
    }

    /// Number of edges with both endpoints selected.
    pub fn violation_count(&self, c: &Configuration) -> usize {
        assert_eq!(c.len(), self.n(), "configuration length must equal vertex count");
        self.edges.iter().filter(|(u, v)| c.get(*u) && c.get(*v)).count()
    }

    pub fn is_independent(&self, c: &Configuration) -> bool {
        self.violation_count(c) == 0
    }

    /// Independent and not extendable by any vertex.
    pub fn is_maximal_independent(&self, c: &Configuration) -> bool {
        self.is_independent(c)
            && (0..self.n()).all(|v| c.get(v) || self.adj[v].iter().any(|&u| c.get(u)))
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n()
    }
}

/// A 0/1 assignment to the vertices of a graph.
///
/// Ordered lexicographically by vertex index (vertex 0 is the most
/// significant position), which is the ordering used for every returned
/// solution set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(Vec<bool>);

impl Configuration {
    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn from_ones(n: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Self::zeros(n);
        for v in ones {
            c.0[v] = true;
        }
        c
    }

    /// Bit `i` of `mask` becomes position `i`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0[i] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    /// Restriction to the listed positions, in order.
    pub fn project(&self, positions: &[usize]) -> Configuration {
        Configuration(positions.iter().map(|&p| self.0[p]).collect())
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.len() <= 64);
        self.ones().fold(0, |m, i| m | 1 << i)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Configuration)
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_graphs() {
        assert!(WeightedGraph::new(vec![1, 1], [(0, 0)]).is_err());
        assert!(WeightedGraph::new(vec![1, 1], [(0, 1), (1, 0)]).is_err());
        assert!(WeightedGraph::new(vec![1, 0], [(0, 1)]).is_err());
        assert!(WeightedGraph::new(vec![1, 1], [(0, 2)]).is_err());
    }

    #[test]
    fn violation_counts() {
        let not = WeightedGraph::unweighted(2, [(0, 1)]).unwrap();
        assert_eq!(not.violation_count(&"11".parse().unwrap()), 1);
        let tri = WeightedGraph::unweighted(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(tri.violation_count(&"111".parse().unwrap()), 3);
        let p3 = WeightedGraph::unweighted(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(p3.violation_count(&"101".parse().unwrap()), 0);
    }

    #[test]
    fn configuration_order_is_lexicographic() {
        let a: Configuration = "01".parse().unwrap();
        let b: Configuration = "10".parse().unwrap();
        assert!(a < b);
        assert_eq!(serde_json::to_string(&b).unwrap(), "\"10\"");
    }
}

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Configuration;

pub const MAX_ARITY: usize = 6;

/// A `k`-variable Boolean relation given by its satisfying assignments.
///
/// Rows are stored as bit masks with pin `i` at bit `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LogicalConstraint {
    arity: usize,
    rows: BTreeSet<u64>,
}

impl LogicalConstraint {
    pub fn new(arity: usize, rows: impl IntoIterator<Item = u64>) -> Result<Self> {
        if !(1..=MAX_ARITY).contains(&arity) {
            return Err(Error::Precondition(format!("arity {arity} outside 1..={MAX_ARITY}")));
        }
        let rows: BTreeSet<u64> = rows.into_iter().collect();
        if let Some(r) = rows.iter().find(|&&r| r >> arity != 0) {
            return Err(Error::Precondition(format!("row {r:#b} has more than {arity} bits")));
        }
        if rows.is_empty() {
            return Err(Error::Precondition("satisfying set is empty".into()));
        }
        if rows.len() == 1 << arity {
            return Err(Error::Precondition("satisfying set is the full cube; no gadget needed".into()));
        }
        Ok(Self { arity, rows })
    }

    /// From rows such as `"010"`; character `i` is pin `i`.
    pub fn from_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let arity = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut masks = Vec::new();
        for r in rows {
            let c: Configuration = r.as_ref().parse()?;
            if c.len() != arity {
                return Err(Error::Parse(format!("row {:?} has length {} not {arity}", r.as_ref(), c.len())));
            }
            masks.push(c.to_mask());
        }
        Self::new(arity, masks)
    }

    /// From a bit matrix, one satisfying assignment per row.
    pub fn from_bit_matrix(rows: &[Vec<u8>]) -> Result<Self> {
        let arity = rows.first().map(Vec::len).unwrap_or(0);
        let mut masks = Vec::new();
        for r in rows {
            if r.len() != arity {
                return Err(Error::Parse(format!("ragged truth table row {r:?}")));
            }
            let mut m = 0;
            for (i, &b) in r.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m |= 1 << i,
                    other => return Err(Error::Parse(format!("truth table entry {other} is not 0/1"))),
                }
            }
            masks.push(m);
        }
        Self::new(arity, masks)
    }

    pub fn to_bit_matrix(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|&m| (0..self.arity).map(|i| (m >> i & 1) as u8).collect())
            .collect()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rows(&self) -> impl Iterator<Item = u64> + '_ {
        self.rows.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, row: u64) -> bool {
        self.rows.contains(&row)
    }

    pub fn configurations(&self) -> Vec<Configuration> {
        let mut out: Vec<_> = self.rows.iter().map(|&m| Configuration::from_mask(self.arity, m)).collect();
        out.sort();
        out
    }

    /// Rows whose pins at `positions` are dropped, i.e. the existential
    /// projection onto the remaining pins. `None` if nothing would remain
    /// or the projection is the full cube.
    pub fn project_onto(&self, keep: &[usize]) -> Option<LogicalConstraint> {
        let rows = self
            .rows
            .iter()
            .map(|&m| keep.iter().enumerate().fold(0, |acc, (i, &p)| acc | (m >> p & 1) << i));
        LogicalConstraint::new(keep.len(), rows).ok()
    }

    pub fn not() -> Self {
        Self::from_strings(&["01", "10"]).unwrap()
    }

    pub fn copy() -> Self {
        Self::from_strings(&["00", "11"]).unwrap()
    }

    /// Inputs `(a, b)` then output.
    pub fn and() -> Self {
        Self::from_strings(&["000", "010", "100", "111"]).unwrap()
    }

    pub fn nand() -> Self {
        Self::from_strings(&["001", "011", "101", "110"]).unwrap()
    }

    pub fn or() -> Self {
        Self::from_strings(&["000", "011", "101", "111"]).unwrap()
    }

    pub fn nor() -> Self {
        Self::from_strings(&["001", "010", "100", "110"]).unwrap()
    }

    pub fn xor() -> Self {
        Self::from_strings(&["000", "011", "101", "110"]).unwrap()
    }

    /// Pins `(a₁, b₁, a₂, b₂)`: `a₂ = a₁ ⊕ flip_a`, `b₂ = b₁ ⊕ flip_b`, and
    /// with `edge` the assignment `a₁ = b₁ = 1` is excluded.
    pub fn crossing(edge: bool, flip_a: bool, flip_b: bool) -> Self {
        let mut rows = Vec::new();
        for a in 0..2u64 {
            for b in 0..2u64 {
                if edge && a == 1 && b == 1 {
                    continue;
                }
                rows.push(a | b << 1 | (a ^ flip_a as u64) << 2 | (b ^ flip_b as u64) << 3);
            }
        }
        Self::new(4, rows).unwrap()
    }

    /// Conjunction of two constraints over a joint pin list: `left[i]` and
    /// `right[j]` give the joint index of each constraint's pins.
    pub fn conjunction(a: &Self, a_map: &[usize], b: &Self, b_map: &[usize], arity: usize) -> Option<Self> {
        let mut rows = Vec::new();
        for m in 0..1u64 << arity {
            let ra = a_map.iter().enumerate().fold(0, |acc, (i, &p)| acc | (m >> p & 1) << i);
            let rb = b_map.iter().enumerate().fold(0, |acc, (i, &p)| acc | (m >> p & 1) << i);
            if a.contains(ra) && b.contains(rb) {
                rows.push(m);
            }
        }
        Self::new(arity, rows).ok()
    }
}

impl Serialize for LogicalConstraint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_bit_matrix().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LogicalConstraint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u8>>::deserialize(deserializer)?;
        Self::from_bit_matrix(&rows).map_err(serde::de::Error::custom)
    }
}

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::Configuration;
use crate::mwis::{solve, Mode, SolverConfig};

use super::Gadget;

/// Outcome of re-solving a gadget and comparing it with its constraint.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Certificate {
    pub ok: bool,
    /// Optimal weight found by the solver.
    pub energy: i64,
    /// Pin assignments reached by some optimum but not allowed.
    pub spurious: Vec<Configuration>,
    /// Allowed assignments with no optimum.
    pub missing: Vec<Configuration>,
    /// Allowed assignments with more than one optimum, with their count.
    pub degenerate: Vec<(Configuration, usize)>,
    /// Recorded energy differs from the solved one.
    pub energy_mismatch: bool,
    pub error: Option<String>,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "certified, energy {}", self.energy);
        }
        if let Some(e) = &self.error {
            return write!(f, "not certified: {e}");
        }
        write!(f, "not certified, energy {}", self.energy)?;
        let list = |v: &[Configuration]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        if !self.spurious.is_empty() {
            write!(f, "; spurious {}", list(&self.spurious))?;
        }
        if !self.missing.is_empty() {
            write!(f, "; missing {}", list(&self.missing))?;
        }
        for (c, k) in &self.degenerate {
            write!(f, "; {c} has {k} optima")?;
        }
        if self.energy_mismatch {
            write!(f, "; recorded energy differs")?;
        }
        Ok(())
    }
}

/// Solve the gadget's graph from scratch and check that the pin projection
/// of its optimal set equals the constraint, one optimum per assignment.
pub fn certify(g: &Gadget) -> Certificate {
    let sol = match solve(&g.graph, Mode::All, SolverConfig::default()) {
        Ok(s) => s,
        Err(e) => return Certificate { error: Some(e.to_string()), ..Default::default() },
    };
    let mut counts: BTreeMap<Configuration, usize> = BTreeMap::new();
    for s in &sol.solutions {
        *counts.entry(s.project(&g.pins)).or_default() += 1;
    }
    let allowed = g.constraint.configurations();
    let spurious: Vec<_> = counts.keys().filter(|c| !allowed.contains(c)).cloned().collect();
    let missing: Vec<_> = allowed.iter().filter(|c| !counts.contains_key(c)).cloned().collect();
    let degenerate: Vec<_> = counts.iter().filter(|(_, &k)| k > 1).map(|(c, &k)| (c.clone(), k)).collect();
    let energy_mismatch = sol.weight != g.mwis_energy;
    Certificate {
        ok: spurious.is_empty() && missing.is_empty() && degenerate.is_empty() && !energy_mismatch,
        energy: sol.weight,
        spurious,
        missing,
        degenerate,
        energy_mismatch,
        error: None,
    }
}

use crate::graph::Configuration;

use super::constraint::LogicalConstraint;

/// Pin projection of a vertex mask as a constraint row.
pub fn project_mask(mask: u64, pins: &[usize]) -> u64 {
    pins.iter().enumerate().fold(0, |acc, (i, &p)| acc | (mask >> p & 1) << i)
}

/// Lazily walks every choice function picking one maximal set per
/// satisfying assignment. Choices are in mixed-radix order with the first
/// assignment varying slowest.
#[derive(Debug, Clone)]
pub struct TargetSets {
    groups: Vec<Vec<u64>>,
    cursor: Option<Vec<usize>>,
}

impl TargetSets {
    /// Mask-level form of [`select_target_sets`]; `mis` holds maximal
    /// independent sets as vertex masks.
    pub fn new(mis: &[u64], pins: &[usize], constraint: &LogicalConstraint) -> Self {
        let groups: Vec<Vec<u64>> = constraint
            .rows()
            .map(|row| mis.iter().copied().filter(|&m| project_mask(m, pins) == row).collect())
            .collect();
        let cursor = groups.iter().all(|g| !g.is_empty()).then(|| vec![0; groups.len()]);
        Self { groups, cursor }
    }

    /// Candidate sets for each satisfying assignment.
    pub fn groups(&self) -> &[Vec<u64>] {
        &self.groups
    }

    /// Number of choice functions, saturating.
    pub fn choice_count(&self) -> u64 {
        self.groups.iter().fold(1u64, |acc, g| acc.saturating_mul(g.len() as u64))
    }
}

impl Iterator for TargetSets {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let cur = self.cursor.as_mut()?;
        let out = cur.iter().zip(&self.groups).map(|(&i, g)| g[i]).collect();
        let mut k = cur.len();
        loop {
            if k == 0 {
                self.cursor = None;
                break;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < self.groups[k].len() {
                break;
            }
            cur[k] = 0;
        }
        Some(out)
    }
}

/// Every way of choosing exactly one maximal independent set per
/// satisfying assignment of `constraint` (pins projected in order). Empty
/// when some assignment has no preimage.
pub fn select_target_sets<'a>(
    mis: &'a [Configuration],
    pins: &'a [usize],
    constraint: &'a LogicalConstraint,
) -> impl Iterator<Item = Vec<Configuration>> + 'a {
    let n = mis.first().map(Configuration::len).unwrap_or(0);
    let masks: Vec<u64> = mis.iter().map(Configuration::to_mask).collect();
    TargetSets::new(&masks, pins, constraint)
        .map(move |choice| choice.into_iter().map(|m| Configuration::from_mask(n, m)).collect())
}

//! The integer weight program for gadget search.
//!
//! Given the maximal independent sets of a candidate graph and a set of
//! target sets, find integer weights `0 ≤ Δᵢ ≤ cap` such that every target
//! has the same weight `E ≥ 1` and every other maximal set weighs at most
//! `E − 1`. The target equalities are homogeneous, so they are eliminated
//! over the rationals first; the remaining free variables are enumerated by
//! depth-first branch and bound with interval propagation on every linear
//! constraint.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Configuration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Minimise the total weight.
    #[default]
    Sum,
    /// Minimise the largest weight, then the total.
    Max,
}

pub const DEFAULT_WEIGHT_CAP: i64 = 6;
pub const DEFAULT_NODE_LIMIT: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSolution {
    pub weights: Vec<i64>,
    /// Common weight of the target sets.
    pub energy: i64,
    /// Vertices that received weight zero.
    pub removable: Vec<usize>,
}

/// Program over `n` vertex weights; sets are vertex masks.
#[derive(Debug, Clone)]
pub struct WeightProgram {
    pub n: usize,
    pub targets: Vec<u64>,
    pub others: Vec<u64>,
    pub cap: i64,
    /// Per-vertex lower bounds, zero when empty.
    pub lower: Vec<i64>,
    pub objective: Objective,
    pub node_limit: u64,
}

/// `lo ≤ coef·x ≤ hi` and `coef·x ≡ 0 (mod modulus)` over the free variables.
#[derive(Debug, Clone)]
struct Lin {
    coef: Vec<i64>,
    lo: i64,
    hi: i64,
    modulus: i64,
    last: usize,
    neg_suffix: Vec<i64>,
    pos_suffix: Vec<i64>,
}

impl Lin {
    fn new(coef: Vec<i64>, lo: i64, hi: i64, modulus: i64, dom: &[(i64, i64)]) -> Self {
        let f = coef.len();
        let mut neg_suffix = vec![0; f + 1];
        let mut pos_suffix = vec![0; f + 1];
        for k in (0..f).rev() {
            let (a, b) = (coef[k] * dom[k].0, coef[k] * dom[k].1);
            neg_suffix[k] = neg_suffix[k + 1] + a.min(b);
            pos_suffix[k] = pos_suffix[k + 1] + a.max(b);
        }
        let last = coef.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
        Self { coef, lo, hi, modulus, last, neg_suffix, pos_suffix }
    }

    /// Whether some completion of the first `k` variables can satisfy it.
    fn viable(&self, partial: i64, k: usize) -> bool {
        if partial + self.neg_suffix[k] > self.hi || partial + self.pos_suffix[k] < self.lo {
            return false;
        }
        k < self.last || self.modulus == 1 || partial % self.modulus == 0
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Scale a rational row to integers by the lcm of its denominators.
fn integer_row(row: &[Ratio<i64>]) -> (Vec<i64>, i64) {
    let d = row.iter().fold(1, |acc, r| lcm(acc, *r.denom()));
    (row.iter().map(|r| (r * d).to_integer()).collect(), d)
}

struct Compiled {
    free: Vec<usize>,
    /// Domain of each free variable.
    dom: Vec<(i64, i64)>,
    /// `x[p] = Σ expr[f]·x_free[f]` for each variable.
    expr: Vec<Vec<Ratio<i64>>>,
    cons: Vec<Lin>,
    objective: Vec<i64>,
}

impl WeightProgram {
    pub fn new(n: usize, targets: Vec<u64>, others: Vec<u64>, cap: i64) -> Self {
        Self { n, targets, others, cap, lower: Vec::new(), objective: Objective::Sum, node_limit: DEFAULT_NODE_LIMIT }
    }

    /// Require weight at least 1 on `vertices`.
    pub fn with_positive(mut self, vertices: &[usize]) -> Self {
        self.lower = vec![0; self.n];
        for &v in vertices {
            self.lower[v] = 1;
        }
        self
    }

    fn lower(&self, i: usize) -> i64 {
        self.lower.get(i).copied().unwrap_or(0)
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    fn bits(&self, m: u64) -> Vec<i64> {
        (0..self.n).map(|i| (m >> i & 1) as i64).collect()
    }

    fn compile(&self, cap: i64) -> Compiled {
        let n = self.n;
        let zero = Ratio::from_integer(0);
        let t0 = self.bits(self.targets[0]);
        // reduced row echelon form of the equality system
        let mut rows: Vec<Vec<Ratio<i64>>> = self.targets[1..]
            .iter()
            .map(|&t| self.bits(t).iter().zip(&t0).map(|(a, b)| Ratio::from_integer(a - b)).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != zero) else { continue };
            rows.swap(r, p);
            let inv = Ratio::from_integer(1) / rows[r][c];
            for v in rows[r].iter_mut() {
                *v *= inv;
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != zero {
                    let f = rows[i][c];
                    for j in 0..n {
                        let d = rows[r][j] * f;
                        rows[i][j] -= d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut expr = vec![vec![zero; free.len()]; n];
        for (fi, &f) in free.iter().enumerate() {
            expr[f][fi] = Ratio::from_integer(1);
        }
        for (ri, &p) in pivots.iter().enumerate() {
            for (fi, &f) in free.iter().enumerate() {
                expr[p][fi] = -rows[ri][f];
            }
        }
        let combine = |w: &[i64]| -> Vec<Ratio<i64>> {
            (0..free.len())
                .map(|fi| (0..n).fold(zero, |acc, i| acc + expr[i][fi] * w[i]))
                .collect()
        };

        let dom: Vec<(i64, i64)> = free.iter().map(|&f| (self.lower(f), cap)).collect();
        let mut cons = Vec::new();
        for &p in &pivots {
            let (coef, d) = integer_row(&expr[p]);
            cons.push(Lin::new(coef, d * self.lower(p), d * cap, d, &dom));
        }
        let (ecoef, ed) = integer_row(&combine(&t0));
        cons.push(Lin::new(ecoef, ed, i64::MAX / 4, 1, &dom));
        for &m in &self.others {
            let diff: Vec<i64> = self.bits(m).iter().zip(&t0).map(|(a, b)| a - b).collect();
            let (coef, d) = integer_row(&combine(&diff));
            cons.push(Lin::new(coef, i64::MIN / 4, -d, 1, &dom));
        }
        let (objective, _) = integer_row(&combine(&vec![1; n]));
        Compiled { free, dom, expr, cons, objective }
    }

    /// Whether any feasible weighting exists, without optimising.
    pub fn feasible(&self) -> Result<bool> {
        self.check()?;
        Ok(self.run(self.cap, true)?.is_some())
    }

    fn check(&self) -> Result<()> {
        if self.targets.is_empty() {
            return Err(Error::Precondition("no target sets".into()));
        }
        if self.cap < 1 {
            return Err(Error::Precondition("weight cap must be at least 1".into()));
        }
        if self.lower.iter().any(|&l| l > self.cap) {
            return Err(Error::Precondition("lower bound above the weight cap".into()));
        }
        if self.n > 64 {
            return Err(Error::Precondition("more than 64 vertices".into()));
        }
        Ok(())
    }

    /// Optimal weights, or `None` when the program is infeasible.
    pub fn solve(&self) -> Result<Option<WeightSolution>> {
        self.check()?;
        match self.objective {
            Objective::Sum => self.solve_capped(self.cap),
            Objective::Max => {
                let start = self.lower.iter().copied().max().unwrap_or(0).max(1);
                for m in start..=self.cap {
                    if let Some(s) = self.solve_capped(m)? {
                        return Ok(Some(s));
                    }
                }
                Ok(None)
            }
        }
    }

    fn solve_capped(&self, cap: i64) -> Result<Option<WeightSolution>> {
        self.run(cap, false)
    }

    fn run(&self, cap: i64, first_only: bool) -> Result<Option<WeightSolution>> {
        let c = self.compile(cap);
        let f = c.free.len();
        let mut obj_neg_suffix = vec![0; f + 1];
        for k in (0..f).rev() {
            let (a, b) = (c.objective[k] * c.dom[k].0, c.objective[k] * c.dom[k].1);
            obj_neg_suffix[k] = obj_neg_suffix[k + 1] + a.min(b);
        }
        let mut st = Dfs {
            c: &c,
            x: vec![0; f],
            partial: vec![0; c.cons.len()],
            obj: 0,
            obj_neg_suffix,
            best: None,
            nodes: 0,
            limit: self.node_limit,
            first_only,
        };
        if !st.cons_viable(0) {
            return Ok(None);
        }
        st.dfs(0)?;
        let Some((_, x)) = st.best else { return Ok(None) };
        let weights: Vec<i64> = c
            .expr
            .iter()
            .map(|e| e.iter().zip(&x).fold(Ratio::from_integer(0), |acc, (r, &v)| acc + r * v).to_integer())
            .collect();
        let t0 = self.targets[0];
        let energy = (0..self.n).filter(|&i| t0 >> i & 1 == 1).map(|i| weights[i]).sum();
        let removable = (0..self.n).filter(|&i| weights[i] == 0).collect();
        Ok(Some(WeightSolution { weights, energy, removable }))
    }
}

struct Dfs<'a> {
    c: &'a Compiled,
    x: Vec<i64>,
    partial: Vec<i64>,
    obj: i64,
    obj_neg_suffix: Vec<i64>,
    best: Option<(i64, Vec<i64>)>,
    nodes: u64,
    limit: u64,
    first_only: bool,
}

impl Dfs<'_> {
    fn cons_viable(&self, k: usize) -> bool {
        self.c.cons.iter().zip(&self.partial).all(|(l, &p)| l.viable(p, k))
    }

    fn dfs(&mut self, k: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::Budget(format!("weight program exceeded {} nodes", self.limit)));
        }
        if let Some((b, _)) = &self.best {
            if self.obj + self.obj_neg_suffix[k] >= *b {
                return Ok(());
            }
        }
        if k == self.x.len() {
            self.best = Some((self.obj, self.x.clone()));
            return Ok(());
        }
        if self.first_only && self.best.is_some() {
            return Ok(());
        }
        let (lo, hi) = self.c.dom[k];
        for v in lo..=hi {
            self.x[k] = v;
            for (p, l) in self.partial.iter_mut().zip(&self.c.cons) {
                *p += l.coef[k] * v;
            }
            self.obj += self.c.objective[k] * v;
            if self.cons_viable(k + 1) {
                self.dfs(k + 1)?;
            }
            for (p, l) in self.partial.iter_mut().zip(&self.c.cons) {
                *p -= l.coef[k] * v;
            }
            self.obj -= self.c.objective[k] * v;
        }
        self.x[k] = 0;
        Ok(())
    }
}

/// Solve the weight program with `targets` as the target sets and every
/// other member of `mis` dominated by a unit margin.
pub fn formulate_and_solve(
    mis: &[Configuration],
    targets: &[Configuration],
    cap: i64,
    objective: Objective,
) -> Result<Option<WeightSolution>> {
    let n = targets
        .first()
        .ok_or_else(|| Error::Precondition("no target sets".into()))?
        .len();
    let tm: Vec<u64> = targets.iter().map(Configuration::to_mask).collect();
    if let Some(t) = targets.iter().find(|t| !mis.contains(t)) {
        return Err(Error::Precondition(format!("target {t} is not among the maximal sets")));
    }
    let others = mis.iter().map(Configuration::to_mask).filter(|m| !tm.contains(m)).collect();
    WeightProgram::new(n, tm, others, cap).with_objective(objective).solve()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfgs(v: &[&str]) -> Vec<Configuration> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn not_gadget_weights() {
        let mis = cfgs(&["01", "10"]);
        let s = formulate_and_solve(&mis, &mis, 4, Objective::Sum).unwrap().unwrap();
        assert_eq!(s.weights, [1, 1]);
        assert_eq!(s.energy, 1);
    }

    #[test]
    fn triangle_single_target() {
        let mis = cfgs(&["100", "010", "001"]);
        let s = formulate_and_solve(&mis, &mis[..1], 4, Objective::Sum).unwrap().unwrap();
        assert_eq!(s.weights, [1, 0, 0]);
        assert_eq!(s.removable, [1, 2]);
    }

    #[test]
    fn infeasible_when_target_contains_a_rival() {
        // 1100 can never beat a superset rival with non-negative weights;
        // here the rival 1110 is not a maximal set of any graph, but the
        // program itself must still report infeasibility
        let p = WeightProgram::new(4, vec![0b0011], vec![0b0111], 4);
        assert_eq!(p.solve().unwrap(), None);
    }

    #[test]
    fn positive_pins() {
        let p = WeightProgram::new(3, vec![0b100], vec![0b010, 0b001], 4).with_positive(&[0, 1]);
        assert_eq!(p.solve().unwrap().unwrap().weights, [1, 1, 2]);
        let p = WeightProgram::new(3, vec![0b100], vec![0b010, 0b001], 1).with_positive(&[0, 1]);
        assert_eq!(p.solve().unwrap(), None);
        let p = WeightProgram::new(3, vec![0b001], vec![0b010, 0b100], 4).with_positive(&[0, 1]);
        assert_eq!(p.solve().unwrap().unwrap().weights, [2, 1, 0]);
    }

    #[test]
    fn max_objective() {
        // P3 copy: targets 010 and 101
        let mis = cfgs(&["010", "101"]);
        let s = formulate_and_solve(&mis, &mis, 4, Objective::Max).unwrap().unwrap();
        assert_eq!(s.weights.iter().max(), Some(&1));
        assert!(s.weights.iter().sum::<i64>() >= 2);
    }
}

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

use super::instance::RydbergInstance;
use super::pulse::{max_step, PulseSchedule};

const KRYLOV_MAX: usize = 40;
const KRYLOV_TOL: f64 = 1e-13;

/// Amplitudes over the `2ᴺ` occupation basis; bit `v` of the index is atom `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl StateVector {
    /// All atoms in the ground state.
    pub fn ground(n: usize) -> Self {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, mask: u64) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[mask as usize] = Complex64::new(1.0, 0.0);
        Self { n, amps }
    }

    /// Normalises the given amplitudes.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(Error::Precondition(format!("{} amplitudes for {n} atoms", amps.len())));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Precondition("state has zero norm".into()));
        }
        Ok(Self { n, amps: amps.into_iter().map(|a| a / norm).collect() })
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Most likely basis state, lowest index on ties.
    pub fn most_likely(&self) -> u64 {
        let p = self.probabilities();
        let mut best = 0;
        for (i, &x) in p.iter().enumerate() {
            if x > p[best] {
                best = i;
            }
        }
        best as u64
    }
}

/// `H = Σ (Ω/2) Xᵥ − Δ Σ wᵥ nᵥ + Σ Vᵤᵥ nᵤ nᵥ`, applied without forming a matrix.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    n: usize,
    interaction: Vec<f64>,
    weight: Vec<f64>,
}

impl Hamiltonian {
    pub fn new(inst: &RydbergInstance) -> Self {
        let n = inst.len();
        let mut interaction = vec![0.0; 1 << n];
        let mut weight = vec![0.0; 1 << n];
        for s in 1usize..1 << n {
            let v = s.trailing_zeros() as usize;
            let rest = s & (s - 1);
            weight[s] = weight[rest] + inst.detuning_weights[v];
            let mut e = interaction[rest];
            let mut r = rest;
            while r != 0 {
                let u = r.trailing_zeros() as usize;
                e += inst.interaction(u, v);
                r &= r - 1;
            }
            interaction[s] = e;
        }
        Self { n, interaction, weight }
    }

    pub fn atoms(&self) -> usize {
        self.n
    }

    /// Diagonal entry for basis state `s`.
    pub fn diagonal(&self, s: usize, delta: f64) -> f64 {
        self.interaction[s] - delta * self.weight[s]
    }

    pub fn apply(&self, omega: f64, delta: f64, psi: &[Complex64], out: &mut [Complex64]) {
        let half = omega / 2.0;
        for (s, o) in out.iter_mut().enumerate() {
            let mut acc = psi[s] * self.diagonal(s, delta);
            if half != 0.0 {
                let mut flips = Complex64::new(0.0, 0.0);
                for v in 0..self.n {
                    flips += psi[s ^ 1 << v];
                }
                acc += flips * half;
            }
            *o = acc;
        }
    }

    /// `⟨ψ|H|ψ⟩` for a normalised state.
    pub fn energy(&self, omega: f64, delta: f64, psi: &StateVector) -> f64 {
        let mut h = vec![Complex64::new(0.0, 0.0); psi.amps.len()];
        self.apply(omega, delta, &psi.amps, &mut h);
        psi.amps.iter().zip(&h).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// Basis states of lowest energy at `Ω = 0`, within a relative tolerance.
    pub fn classical_ground_states(&self, delta: f64) -> Vec<u64> {
        let d: Vec<f64> = (0..1usize << self.n).map(|s| self.diagonal(s, delta)).collect();
        let min = d.iter().copied().fold(f64::INFINITY, f64::min);
        let tol = 1e-9 * (1.0 + min.abs());
        (0..d.len()).filter(|&s| d[s] <= min + tol).map(|s| s as u64).collect()
    }

    /// Replaces `psi` by `exp(−iHt)·psi` at fixed `Ω` and `Δ`, using a
    /// Krylov subspace grown until the truncation estimate is negligible.
    pub fn propagate(&self, omega: f64, delta: f64, t: f64, psi: &mut [Complex64]) {
        let zero = Complex64::new(0.0, 0.0);
        let beta0 = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if beta0 == 0.0 {
            return;
        }
        let mut basis: Vec<Vec<Complex64>> = vec![psi.iter().map(|a| a / beta0).collect()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![zero; psi.len()];
        let coeffs = loop {
            let j = basis.len() - 1;
            self.apply(omega, delta, &basis[j], &mut w);
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            // full re-orthogonalisation, twice for stability
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    for (x, y) in w.iter_mut().zip(b) {
                        *x -= c * y;
                    }
                }
            }
            let next = w.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let m = alpha.len();
            let c = tridiagonal_exp(&alpha, &beta, t);
            let exhausted = next <= 1e-12 * (1.0 + a.abs());
            if exhausted || m == KRYLOV_MAX || (next * c[m - 1].norm()) < KRYLOV_TOL {
                break c;
            }
            beta.push(next);
            basis.push(w.iter().map(|x| x / next).collect());
        };
        for x in psi.iter_mut() {
            *x = zero;
        }
        for (c, b) in coeffs.iter().zip(&basis) {
            let c = c * beta0;
            for (x, y) in psi.iter_mut().zip(b) {
                *x += c * y;
            }
        }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// First column of `exp(−i·T·t)` for the symmetric tridiagonal `T`.
fn tridiagonal_exp(alpha: &[f64], beta: &[f64], t: f64) -> Vec<Complex64> {
    let m = alpha.len();
    let mut tm = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        tm[(i, i)] = alpha[i];
        if i + 1 < m {
            tm[(i, i + 1)] = beta[i];
            tm[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(tm);
    (0..m)
        .map(|i| {
            (0..m)
                .map(|k| {
                    let q = eig.eigenvectors[(i, k)] * eig.eigenvectors[(0, k)];
                    Complex64::from_polar(q, -eig.eigenvalues[k] * t)
                })
                .sum()
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub state: StateVector,
    pub steps: usize,
    pub dt: f64,
    /// Largest deviation of the norm from one seen after any step.
    pub max_norm_drift: f64,
    pub warnings: Vec<String>,
}

/// Evolves `|0…0⟩` under `schedule`, with `Ω` and `Δ` sampled at the
/// midpoint of each step of length at most `dt`.
pub fn evolve(inst: &RydbergInstance, schedule: &PulseSchedule, dt: f64) -> Result<Evolution> {
    evolve_from(inst, schedule, dt, StateVector::ground(inst.len()))
}

pub fn evolve_from(inst: &RydbergInstance, schedule: &PulseSchedule, dt: f64, start: StateVector) -> Result<Evolution> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Precondition(format!("time step {dt} is not positive")));
    }
    if start.n != inst.len() {
        return Err(Error::Precondition(format!("state of {} atoms for {} atoms", start.n, inst.len())));
    }
    let mut warnings = Vec::new();
    let bound = max_step(schedule.omega_max());
    if dt > bound * (1.0 + 1e-12) {
        warnings.push(format!("time step {dt:.3e} μs exceeds 0.1/Ω_max = {bound:.3e} μs"));
    }
    let h = Hamiltonian::new(inst);
    let steps = (schedule.total / dt).ceil().max(1.0) as usize;
    let step = schedule.total / steps as f64;
    let mut psi = start;
    let mut drift: f64 = 0.0;
    for k in 0..steps {
        let t = (k as f64 + 0.5) * step;
        h.propagate(schedule.omega_at(t), schedule.delta_at(t), step, &mut psi.amps);
        drift = drift.max((psi.norm() - 1.0).abs());
    }
    Ok(Evolution { state: psi, steps, dt: step, max_norm_drift: drift, warnings })
}

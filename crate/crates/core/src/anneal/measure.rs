use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Configuration;

use super::evolve::{Hamiltonian, StateVector};

/// Expected fraction of violated bonds, `(1/|E|) Σₙ P(n) Σ₍ᵤ,ᵥ₎ nᵤnᵥ`.
pub fn violation_rate(edges: &[(usize, usize)], psi: &StateVector) -> Result<f64> {
    if edges.is_empty() {
        return Err(Error::Precondition("violation rate needs at least one edge".into()));
    }
    let mut total = 0.0;
    for (s, a) in psi.amps.iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let bad = edges.iter().filter(|&&(u, v)| s >> u & 1 == 1 && s >> v & 1 == 1).count();
        total += p * bad as f64;
    }
    Ok(total / edges.len() as f64)
}

/// Population of the lowest-energy manifold of `H(Ω = 0, Δ)`.
pub fn ground_state_overlap(h: &Hamiltonian, delta: f64, psi: &StateVector) -> f64 {
    h.classical_ground_states(delta).iter().map(|&s| psi.amps[s as usize].norm_sqr()).sum()
}

/// Independent measurement outcomes, reproducible for a fixed seed.
pub fn sample_bitstrings(psi: &StateVector, shots: usize, seed: u64) -> Result<Vec<Configuration>> {
    if shots == 0 {
        return Err(Error::Precondition("at least one shot is required".into()));
    }
    let dist = WeightedIndex::new(psi.probabilities()).map_err(|e| Error::Precondition(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..shots)
        .map(|_| Configuration::from_mask(psi.n, dist.sample(&mut rng) as u64))
        .collect())
}

use std::f64::consts::PI;

use num_complex::Complex64;
use tlsg::anneal::*;
use tlsg::lattice::{GridCoord, GridLayout, LatticeFamily, PhysicalCoord};
use tlsg::mwis::solve_mwis;
use tlsg::Configuration;

fn layout(family: LatticeFamily, sites: &[((i64, i64), i64)]) -> GridLayout {
    GridLayout::from_weighted_coords(family, sites.iter().map(|&((x, y), w)| (GridCoord::new(x, y), w))).unwrap()
}

fn triangle() -> GridLayout {
    layout(LatticeFamily::triangular(), &[((0, 0), 1), ((0, 1), 1), ((1, 0), 1)])
}

fn wire() -> GridLayout {
    layout(
        LatticeFamily::triangular(),
        &[((0, 0), 2), ((0, 1), 2), ((0, 2), 2), ((0, 3), 2), ((0, 4), 2)],
    )
}

fn single_atom() -> RydbergInstance {
    RydbergInstance::new(vec![PhysicalCoord { x: 0.0, y: 0.0 }], vec![1.0], DEFAULT_C6).unwrap()
}

#[test]
fn pi_pulse_transfers_the_population() {
    // triangular Rabi pulse of area π at zero detuning
    let t = 1.0;
    let peak = 2.0 * PI / t;
    let s = PulseSchedule::new(t, vec![(0.0, 0.0), (t / 2.0, peak), (t, 0.0)], vec![(0.0, 0.0), (t, 0.0)]).unwrap();
    assert!((s.pulse_area() - PI).abs() < 1e-12);
    let run = evolve(&single_atom(), &s, max_step(peak)).unwrap();
    assert!(run.state.amps[1].norm_sqr() > 1.0 - 1e-3, "{}", run.state.amps[1].norm_sqr());
}

#[test]
fn norm_and_energy_are_conserved() {
    let inst = RydbergInstance::from_layout(&wire(), &AtomParams::default()).unwrap();
    let h = Hamiltonian::new(&inst);
    let (omega, delta) = (DEFAULT_OMEGA_MAX, 0.6 * DEFAULT_DELTA_MAX);
    let dt = max_step(DEFAULT_OMEGA_MAX);
    // start from a generic superposition
    let amps: Vec<Complex64> = (0..32).map(|s| Complex64::from_polar(1.0 + (s % 5) as f64, s as f64 * 0.7)).collect();
    let mut psi = StateVector::from_amplitudes(5, amps).unwrap();
    let e0 = h.energy(omega, delta, &psi);
    for _ in 0..1000 {
        h.propagate(omega, delta, dt, &mut psi.amps);
    }
    assert!((psi.norm() - 1.0).abs() <= 1e-8);
    let e1 = h.energy(omega, delta, &psi);
    assert!((e1 - e0).abs() <= 1e-6 * e0.abs().max(1.0), "{e0} -> {e1}");
}

#[test]
fn driven_anneal_keeps_the_norm() {
    let inst = RydbergInstance::from_layout(&wire(), &AtomParams::default()).unwrap();
    let run = evolve(&inst, &PulseSchedule::standard(4.0).unwrap(), max_step(DEFAULT_OMEGA_MAX)).unwrap();
    assert!(run.steps >= 1000);
    assert!(run.max_norm_drift <= 1e-8 * (run.steps as f64 / 1000.0));
    assert!(run.warnings.is_empty());
}

#[test]
fn oversized_step_is_flagged() {
    let s = PulseSchedule::standard(0.5).unwrap();
    let run = evolve(&single_atom(), &s, 0.05).unwrap();
    assert_eq!(run.warnings.len(), 1);
}

#[test]
fn long_anneals_end_in_a_maximum_weight_set() {
    for l in [triangle(), wire()] {
        let inst = RydbergInstance::from_layout(&l, &AtomParams::default()).unwrap();
        let run = evolve(&inst, &PulseSchedule::standard(4.0).unwrap(), max_step(DEFAULT_OMEGA_MAX)).unwrap();
        let best = Configuration::from_mask(l.len(), run.state.most_likely());
        let sols = solve_mwis(&l.to_graph()).unwrap().solutions;
        assert!(sols.contains(&best), "{best} not optimal");
    }
}

#[test]
fn slow_triangle_ends_with_one_excitation() {
    let inst = RydbergInstance::from_layout(&triangle(), &AtomParams::default()).unwrap();
    let run = evolve(&inst, &PulseSchedule::standard(4.0).unwrap(), max_step(DEFAULT_OMEGA_MAX)).unwrap();
    let single: f64 = [1usize, 2, 4].iter().map(|&s| run.state.amps[s].norm_sqr()).sum();
    assert!(single > 0.95, "{single}");
}

#[test]
fn ground_state_overlap_grows_with_time() {
    let rows = anneal_layout(&wire(), &[0.5, 1.0, 2.0, 4.0], &AnnealConfig::default()).unwrap();
    let o: Vec<f64> = rows.iter().map(|r| r.ground_overlap).collect();
    let inversions = o.windows(2).filter(|w| w[1] < w[0]).count();
    assert!(inversions <= 1, "{o:?}");
    assert!(o[3] > o[0]);
}

#[test]
fn undriven_state_stays_put() {
    let inst = RydbergInstance::from_layout(&wire(), &AtomParams::default()).unwrap();
    let s = PulseSchedule::new(1.0, vec![(0.0, 0.0), (1.0, 0.0)], vec![(0.0, -20.0), (0.3, 5.0), (1.0, 40.0)]).unwrap();
    let run = evolve(&inst, &s, 0.004).unwrap();
    assert!((run.state.amps[0].norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn sampling_statistics() {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let psi = StateVector::from_amplitudes(2, vec![z, Complex64::new(r, 0.0), Complex64::new(0.0, r), z]).unwrap();
    let shots = 10_000;
    let a = sample_bitstrings(&psi, shots, 7).unwrap();
    assert_eq!(a, sample_bitstrings(&psi, shots, 7).unwrap());
    assert_ne!(a, sample_bitstrings(&psi, shots, 8).unwrap());
    let ones = a.iter().filter(|c| c.to_string() == "10").count() as f64;
    let sigma = (shots as f64 * 0.25).sqrt();
    assert!((ones - shots as f64 / 2.0).abs() < 5.0 * sigma);
    assert!(a.iter().all(|c| c.to_string() == "10" || c.to_string() == "01"));
}

#[test]
fn violation_rate_is_exact() {
    let l = triangle();
    let edges = l.derive_edges();
    assert_eq!(edges.len(), 3);
    let amps: Vec<Complex64> = (0..8).map(|s| Complex64::new(if s == 3 || s == 7 { 1.0 } else { 0.0 }, 0.0)).collect();
    let psi = StateVector::from_amplitudes(3, amps).unwrap();
    // half weight on one violated bond, half on three
    assert!((violation_rate(&edges, &psi).unwrap() - (0.5 / 3.0 + 0.5)).abs() < 1e-12);
}

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rabi frequency and detuning are angular frequencies in rad/μs, times in μs.
pub const DEFAULT_OMEGA_MAX: f64 = 2.0 * PI * 4.0;
pub const DEFAULT_DELTA_MAX: f64 = 5.0 * DEFAULT_OMEGA_MAX;
/// Van der Waals coefficient in rad/μs · μm⁶.
pub const DEFAULT_C6: f64 = 2.0 * PI * 862_690.0;
/// Fraction of the total time spent on each Rabi ramp.
pub const DEFAULT_RAMP: f64 = 0.1;

/// Largest recommended time step for a given peak Rabi frequency.
pub fn max_step(omega_max: f64) -> f64 {
    0.1 / omega_max
}

/// Piecewise-linear drive. Breakpoints are `(τ, value)` with `τ` in
/// `[0, total]`, strictly increasing, starting at 0 and ending at `total`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub total: f64,
    pub omega: Vec<(f64, f64)>,
    pub delta: Vec<(f64, f64)>,
}

impl PulseSchedule {
    /// A general schedule. The Rabi drive must vanish at both ends.
    pub fn new(total: f64, omega: Vec<(f64, f64)>, delta: Vec<(f64, f64)>) -> Result<Self> {
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Precondition(format!("total time {total} is not positive")));
        }
        for (name, pts) in [("Rabi", &omega), ("detuning", &delta)] {
            check_breakpoints(name, total, pts)?;
        }
        if omega[0].1 != 0.0 || omega[omega.len() - 1].1 != 0.0 {
            return Err(Error::Precondition("Rabi frequency must be zero at both ends".into()));
        }
        Ok(Self { total, omega, delta })
    }

    /// The usual annealing protocol: with the detuning held at `−Δmax`, Ω
    /// ramps up over `ramp·T`; Δ then sweeps linearly to `+Δmax` while Ω
    /// is held; finally Ω ramps back down at `+Δmax`.
    pub fn annealing(total: f64, omega_max: f64, delta_max: f64, ramp: f64) -> Result<Self> {
        if !(0.0 < ramp && ramp < 0.5) {
            return Err(Error::Precondition(format!("ramp fraction {ramp} outside (0, 0.5)")));
        }
        let (t1, t2) = (ramp * total, (1.0 - ramp) * total);
        Self::new(
            total,
            vec![(0.0, 0.0), (t1, omega_max), (t2, omega_max), (total, 0.0)],
            vec![(0.0, -delta_max), (t1, -delta_max), (t2, delta_max), (total, delta_max)],
        )
    }

    pub fn standard(total: f64) -> Result<Self> {
        Self::annealing(total, DEFAULT_OMEGA_MAX, DEFAULT_DELTA_MAX, DEFAULT_RAMP)
    }

    pub fn omega_at(&self, t: f64) -> f64 {
        interpolate(&self.omega, t)
    }

    pub fn delta_at(&self, t: f64) -> f64 {
        interpolate(&self.delta, t)
    }

    pub fn omega_max(&self) -> f64 {
        self.omega.iter().map(|p| p.1.abs()).fold(0.0, f64::max)
    }

    pub fn delta_max(&self) -> f64 {
        self.delta.iter().map(|p| p.1.abs()).fold(0.0, f64::max)
    }

    /// `∫ Ω dτ` over the whole schedule.
    pub fn pulse_area(&self) -> f64 {
        self.omega.windows(2).map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0).sum()
    }
}

fn check_breakpoints(name: &str, total: f64, pts: &[(f64, f64)]) -> Result<()> {
    if pts.len() < 2 {
        return Err(Error::Precondition(format!("{name} schedule needs at least two breakpoints")));
    }
    if pts[0].0 != 0.0 || pts[pts.len() - 1].0 != total {
        return Err(Error::Precondition(format!("{name} schedule must span [0, {total}]")));
    }
    if pts.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::Precondition(format!("{name} breakpoint times are not increasing")));
    }
    if pts.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::Precondition(format!("{name} schedule has a non-finite value")));
    }
    Ok(())
}

fn interpolate(pts: &[(f64, f64)], t: f64) -> f64 {
    let i = pts.partition_point(|p| p.0 <= t);
    if i == 0 {
        return pts[0].1;
    }
    if i == pts.len() {
        return pts[i - 1].1;
    }
    let ((t0, v0), (t1, v1)) = (pts[i - 1], pts[i]);
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

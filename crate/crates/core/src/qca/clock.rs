// SPDX-License-Identifier: Apache-2.0

//! Four-phase adiabatic clocking.
//!
//! Each zone cycles Switch → Hold → Release → Relax, one phase per
//! `steps_per_phase` simulation steps. Zone `z` lags zone `z - 1` by one
//! phase, so data latched in one zone drives the zone after it.

use std::fmt;

use super::geometry::Geometry;
use super::QcaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Switch,
    Hold,
    Release,
    Relax,
}

impl Phase {
    pub fn from_index(index: usize) -> Self {
        match index % 4 {
            0 => Phase::Switch,
            1 => Phase::Hold,
            2 => Phase::Release,
            _ => Phase::Relax,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Phase::Switch => 0,
            Phase::Hold => 1,
            Phase::Release => 2,
            Phase::Relax => 3,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Switch => "switch",
            Phase::Hold => "hold",
            Phase::Release => "release",
            Phase::Relax => "relax",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockSchedule {
    pub steps_per_phase: usize,
    /// Tunneling energy (meV) while relaxed.
    pub gamma_high: f64,
    /// Tunneling energy (meV) while held.
    pub gamma_low: f64,
}

impl ClockSchedule {
    /// Default clock: `gamma_high` is four adjacent kink energies and
    /// `gamma_low` a hundredth of that.
    pub fn for_geometry(geometry: &Geometry) -> Self {
        ClockSchedule::with_gamma_high(4.0 * geometry.adjacent_kink_energy())
    }

    pub fn with_gamma_high(gamma_high: f64) -> Self {
        ClockSchedule {
            steps_per_phase: 8,
            gamma_high,
            gamma_low: gamma_high / 100.0,
        }
    }

    pub fn validate(&self) -> Result<(), QcaError> {
        if self.steps_per_phase == 0 {
            return Err(QcaError::InvalidParams(
                "steps_per_phase must be > 0".into(),
            ));
        }
        if !(self.gamma_low > 0.0 && self.gamma_high >= self.gamma_low) {
            return Err(QcaError::InvalidParams(format!(
                "need 0 < gamma_low <= gamma_high, got {} / {}",
                self.gamma_low, self.gamma_high
            )));
        }
        Ok(())
    }

    pub fn steps_per_cycle(&self) -> usize {
        4 * self.steps_per_phase
    }

    /// `((step / steps_per_phase) - zone) mod 4`.
    pub fn phase_index(&self, zone: u8, step: usize) -> usize {
        let coarse = (step / self.steps_per_phase) % 4;
        (coarse + 4 - usize::from(zone % 4)) % 4
    }

    pub fn phase(&self, zone: u8, step: usize) -> Phase {
        Phase::from_index(self.phase_index(zone, step))
    }

    /// Whether `step` is the last step of its phase.
    pub fn is_phase_end(&self, step: usize) -> bool {
        (step + 1).is_multiple_of(self.steps_per_phase)
    }

    /// Tunneling energy of `zone` at `step`. Switch ramps linearly from
    /// high to low, reaching `gamma_low` on its last step; Release ramps
    /// back up.
    pub fn gamma(&self, zone: u8, step: usize) -> f64 {
        let frac = ((step % self.steps_per_phase) + 1) as f64 / self.steps_per_phase as f64;
        let (lo, hi) = (self.gamma_low, self.gamma_high);
        match self.phase(zone, step) {
            Phase::Switch => hi * (1.0 - frac) + lo * frac,
            Phase::Hold => lo,
            Phase::Release => lo * (1.0 - frac) + hi * frac,
            Phase::Relax => hi,
        }
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Clocked bistable relaxation.
//!
//! Each simulation step fixes every zone's phase and tunneling energy, then
//! sweeps the active cells synchronously until the largest polarization
//! change drops below the tolerance. Cells in Switch or Release follow their
//! neighbours through the bistable update, Hold freezes a cell, Relax
//! forces it to the null state and input cells are pinned throughout.
//! Convergence is judged on the undamped change of every active cell.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::clock::{ClockSchedule, Phase};
use super::geometry::kink_energy;
use super::layout::{CellKind, Logic, Polarization, QcaLayout};
use super::QcaError;
use crate::Bit;

/// Active-cell count above which sweeps run in parallel.
const PARALLEL_THRESHOLD: usize = 256;

/// Sweeps applied at full strength before under-relaxation starts.
const UNDAMPED_SWEEPS: usize = 16;

/// Fraction of the update applied once damped. Synchronous sweeps of
/// strongly coupled cells can settle into a period-2 cycle; mixing with the
/// previous iterate removes it without moving the fixed points.
const DAMPING: f64 = 0.5;

/// Jacobi sweeps before falling back to in-place sweeps in cell order.
/// Frustrated clusters at low tunneling energy can cycle under any fixed
/// mixing; sequential updates with symmetric couplings descend an energy
/// and settle.
const JACOBI_SWEEPS: usize = 512;

/// Steady-state polarization of a two-state cell whose neighbours exert the
/// kink-weighted sum `neighbor_sum` at tunneling energy `gamma`:
/// `f/√(1+f²)` with `f = neighbor_sum/(2γ)`.
pub fn bistable_update(neighbor_sum: f64, gamma: f64) -> Polarization {
    let f = neighbor_sum / (2.0 * gamma);
    Polarization::new(f / f.hypot(1.0))
}

/// Precomputed couplings of one layout under one clock.
#[derive(Debug, Clone)]
pub struct Simulator<'a> {
    layout: &'a QcaLayout,
    schedule: ClockSchedule,
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl<'a> Simulator<'a> {
    pub fn new(layout: &'a QcaLayout, schedule: ClockSchedule) -> Result<Self, QcaError> {
        layout.geometry.validate()?;
        layout.params.validate(&layout.geometry)?;
        schedule.validate()?;
        let cells = layout.cells();
        let radius = layout.params.radius_of_effect_nm;
        let neighbors = (0..cells.len())
            .map(|i| {
                (0..cells.len())
                    .filter(|&j| j != i)
                    .filter_map(|j| {
                        kink_energy(&cells[i], &cells[j], &layout.geometry, radius)
                            .ok()
                            .map(|k| (j, k))
                    })
                    .collect()
            })
            .collect();
        Ok(Simulator {
            layout,
            schedule,
            neighbors,
        })
    }

    pub fn layout(&self) -> &QcaLayout {
        self.layout
    }

    pub fn schedule(&self) -> &ClockSchedule {
        &self.schedule
    }

    /// `(neighbour index, kink energy)` pairs of cell `i`.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.neighbors[i]
    }

    /// Kink-weighted polarization sum around cell `i`, in a fixed order.
    pub fn neighbor_sum(&self, i: usize, state: &[f64]) -> f64 {
        self.neighbors[i]
            .iter()
            .fold(0.0, |acc, &(j, k)| acc + k * state[j])
    }

    /// Largest kink energy between any two cells of the layout.
    pub fn max_kink_energy(&self) -> f64 {
        self.neighbors
            .iter()
            .flatten()
            .fold(0.0_f64, |m, &(_, k)| m.max(k.abs()))
    }

    /// Per-cell pinned polarization for this input binding; `None` for
    /// cells that relax.
    pub fn pins(
        &self,
        inputs: &BTreeMap<String, Polarization>,
    ) -> Result<Vec<Option<f64>>, QcaError> {
        for name in inputs.keys() {
            if !self
                .layout
                .cells()
                .iter()
                .any(|c| matches!(&c.kind, CellKind::NamedInput(n) if n == name))
            {
                return Err(QcaError::UnknownInput(name.clone()));
            }
        }
        self.layout
            .cells()
            .iter()
            .map(|c| match &c.kind {
                CellKind::FixedInput(p) => Ok(Some(p.value())),
                CellKind::NamedInput(name) => inputs
                    .get(name)
                    .map(|p| Some(p.value()))
                    .ok_or_else(|| QcaError::UnboundInput(name.clone())),
                _ => Ok(None),
            })
            .collect()
    }

    /// Advances `state` through one clock step. Returns the number of sweeps.
    pub fn step(
        &self,
        step: usize,
        pins: &[Option<f64>],
        state: &mut [f64],
    ) -> Result<usize, QcaError> {
        let cells = self.layout.cells();
        let mut active: Vec<(usize, f64)> = Vec::new();
        for (i, cell) in cells.iter().enumerate() {
            if let Some(p) = pins[i] {
                state[i] = p;
                continue;
            }
            match self.schedule.phase(cell.zone, step) {
                Phase::Switch | Phase::Release => {
                    active.push((i, self.schedule.gamma(cell.zone, step)));
                }
                Phase::Hold => {}
                Phase::Relax => state[i] = 0.0,
            }
        }
        if active.is_empty() {
            return Ok(0);
        }
        let tolerance = self.layout.params.convergence_tolerance;
        let max_iterations = self.layout.params.max_iterations_per_step;
        let mut next = vec![0.0; active.len()];
        for iteration in 1..=max_iterations {
            let mut worst = (0.0_f64, active[0].0);
            let mut track = |i: usize, delta: f64| {
                if delta > worst.0 {
                    worst = (delta, i);
                }
            };
            if iteration > JACOBI_SWEEPS {
                for &(i, gamma) in &active {
                    let p = bistable_update(self.neighbor_sum(i, state), gamma).value();
                    track(i, (p - state[i]).abs());
                    state[i] = p;
                }
            } else {
                let view: &[f64] = state;
                let update = |&(i, gamma): &(usize, f64)| {
                    bistable_update(self.neighbor_sum(i, view), gamma).value()
                };
                if active.len() >= PARALLEL_THRESHOLD {
                    active.par_iter().map(update).collect_into_vec(&mut next);
                } else {
                    next.clear();
                    next.extend(active.iter().map(update));
                }
                let mix = if iteration > UNDAMPED_SWEEPS {
                    DAMPING
                } else {
                    1.0
                };
                for (&(i, _), &p) in active.iter().zip(&next) {
                    track(i, (p - state[i]).abs());
                    state[i] += mix * (p - state[i]);
                }
            }
            if worst.0 < tolerance {
                return Ok(iteration);
            }
            if iteration == max_iterations {
                return Err(QcaError::NoConvergence {
                    step,
                    cell: cells[worst.1].id.clone(),
                    delta: worst.0,
                });
            }
        }
        unreachable!("loop returns on its last iteration")
    }
}

/// Outcome of a single relaxation step.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxOutcome {
    /// Polarizations in layout order.
    pub state: Vec<Polarization>,
    pub iterations: usize,
}

/// Relaxes `layout` for clock step `step`, starting from `state` (one entry
/// per cell, layout order).
pub fn relax(
    layout: &QcaLayout,
    schedule: &ClockSchedule,
    step: usize,
    input_values: &BTreeMap<String, Polarization>,
    state: &[Polarization],
) -> Result<RelaxOutcome, QcaError> {
    if state.len() != layout.len() {
        return Err(QcaError::InvalidParams(format!(
            "state has {} entries for {} cells",
            state.len(),
            layout.len()
        )));
    }
    let sim = Simulator::new(layout, *schedule)?;
    let pins = sim.pins(input_values)?;
    let mut raw: Vec<f64> = state.iter().map(|p| p.value()).collect();
    let iterations = sim.step(step, &pins, &mut raw)?;
    Ok(RelaxOutcome {
        state: raw.into_iter().map(Polarization::new).collect(),
        iterations,
    })
}

/// Input binding for one vector, by input name.
pub type InputVector = BTreeMap<String, Bit>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub cycles_per_vector: usize,
    /// Record every cell, not only the named outputs.
    pub record_all: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            cycles_per_vector: 2,
            record_all: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub step: usize,
    pub zone0_phase: Phase,
    pub values: Vec<f64>,
}

/// Polarization traces of a run plus the logical verdict per vector.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSet {
    pub columns: Vec<String>,
    pub rows: Vec<TraceRow>,
    pub output_names: Vec<String>,
    /// Output polarization sampled at the end of the output zone's last
    /// Hold phase inside each vector's window.
    pub samples: Vec<BTreeMap<String, f64>>,
    pub decoded: Vec<BTreeMap<String, Logic>>,
    pub iterations: usize,
}

impl TraceSet {
    /// Decoded values of one output across all vectors.
    pub fn decoded_output(&self, name: &str) -> Vec<Logic> {
        self.decoded
            .iter()
            .map(|d| d.get(name).copied().unwrap_or(Logic::Indeterminate))
            .collect()
    }

    /// `step,zone_phase0,<columns...>` with six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,zone_phase0");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{},{}", row.step, row.zone0_phase);
            for v in &row.values {
                let _ = write!(out, ",{v:.6}");
            }
            out.push('\n');
        }
        out
    }

    /// Largest |p| seen anywhere in the recorded trace.
    pub fn max_abs_polarization(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.values.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Applies each vector for `cycles_per_vector` clock cycles and decodes the
/// named outputs.
pub fn run(
    layout: &QcaLayout,
    schedule: &ClockSchedule,
    vectors: &[InputVector],
    cycles_per_vector: usize,
) -> Result<TraceSet, QcaError> {
    run_with(
        layout,
        schedule,
        vectors,
        RunOptions {
            cycles_per_vector,
            record_all: false,
        },
    )
}

pub fn run_with(
    layout: &QcaLayout,
    schedule: &ClockSchedule,
    vectors: &[InputVector],
    options: RunOptions,
) -> Result<TraceSet, QcaError> {
    if options.cycles_per_vector == 0 {
        return Err(QcaError::InvalidParams(
            "cycles_per_vector must be > 0".into(),
        ));
    }
    let sim = Simulator::new(layout, *schedule)?;
    let cells = layout.cells();
    let outputs: Vec<(usize, String)> = cells
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match &c.kind {
            CellKind::NamedOutput(n) => Some((i, n.clone())),
            _ => None,
        })
        .collect();
    let (recorded, columns): (Vec<usize>, Vec<String>) = if options.record_all {
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.id.clone()))
            .unzip()
    } else {
        outputs.iter().cloned().unzip()
    };

    let window = options.cycles_per_vector * schedule.steps_per_cycle();
    let mut state = vec![0.0; cells.len()];
    let mut rows = Vec::with_capacity(window * vectors.len());
    let mut samples = Vec::with_capacity(vectors.len());
    let mut decoded = Vec::with_capacity(vectors.len());
    let mut iterations = 0;

    for (k, vector) in vectors.iter().enumerate() {
        let bound: BTreeMap<String, Polarization> = vector
            .iter()
            .map(|(name, bit)| (name.clone(), Polarization::from_bit(*bit)))
            .collect();
        let pins = sim.pins(&bound)?;
        let mut sample: Vec<f64> = vec![0.0; outputs.len()];
        for step in k * window..(k + 1) * window {
            iterations += sim.step(step, &pins, &mut state)?;
            if schedule.is_phase_end(step) {
                for (slot, (i, _)) in sample.iter_mut().zip(&outputs) {
                    if schedule.phase(cells[*i].zone, step) == Phase::Hold {
                        *slot = state[*i];
                    }
                }
            }
            rows.push(TraceRow {
                step,
                zone0_phase: schedule.phase(0, step),
                values: recorded.iter().map(|&i| state[i]).collect(),
            });
        }
        decoded.push(
            outputs
                .iter()
                .zip(&sample)
                .map(|((_, name), &p)| (name.clone(), Logic::from_polarization(p)))
                .collect(),
        );
        samples.push(
            outputs
                .iter()
                .zip(&sample)
                .map(|((_, name), &p)| (name.clone(), p))
                .collect(),
        );
    }

    Ok(TraceSet {
        columns,
        rows,
        output_names: outputs.into_iter().map(|(_, n)| n).collect(),
        samples,
        decoded,
        iterations,
    })
}

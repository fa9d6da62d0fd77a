// SPDX-License-Identifier: Apache-2.0

//! Energy dissipation estimates for clocked layouts.
//!
//! Each cell is a two-state system with energy vector `Γ = (-2γ, 0, s)`,
//! where `s` is the kink-weighted sum of its neighbours' polarizations, and
//! thermal steady state `λ = Γ/|Γ|·tanh(|Γ|/2kT)`. A clock event moving the
//! cell from `Γ₋` to `Γ₊` dissipates at most `½·Γ₊·(λ₊ - λ₋)`.
//!
//! For every ordered pair of input vectors `(a, b)` a cell sees two events
//! per clock cycle: Switch, from `(γ_high, s_a)` to `(γ_low, s_b)`, and
//! Release, from `(γ_low, s_b)` back to `(γ_high, s_b)`. A Switch event
//! whose neighbours change logic value between `a` and `b` is switching
//! energy; every other event is leakage. The neighbour sums come from each
//! vector's steady state: the value every cell holds at the end of its
//! Switch phase once that value repeats from one cycle to the next.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::qca::{ClockSchedule, Logic, Phase, Polarization, QcaError, QcaLayout, Simulator};

/// Boltzmann constant in meV/K.
pub const BOLTZMANN_MEV_PER_K: f64 = 0.08617;

/// `γ_low / γ_high` during a power sweep, matching the default clock.
pub const GAMMA_LOW_RATIO: f64 = 0.01;

/// Largest number of named inputs [`analyze`] enumerates.
pub const MAX_POWER_INPUTS: usize = 8;

/// Clock cycles a vector may take before its steady state must repeat.
const MAX_SETTLE_CYCLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PowerError {
    #[error("invalid power parameters: {0}")]
    InvalidParams(String),
    #[error("layout has {0} inputs; at most {MAX_POWER_INPUTS} can be enumerated")]
    TooManyInputs(usize),
    #[error("vector {vector} did not reach a steady state within {MAX_SETTLE_CYCLES} cycles")]
    Unsettled { vector: String },
    #[error("invalid vector: {0}")]
    InvalidVector(String),
    #[error("report does not match layout: {0}")]
    MismatchedReport(String),
    #[error(transparent)]
    Qca(#[from] QcaError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerParams {
    /// Tunneling energies (meV) swept as `γ_high`.
    pub ek_values: Vec<f64>,
    pub temperature_k: f64,
}

impl Default for PowerParams {
    fn default() -> Self {
        PowerParams {
            ek_values: vec![0.5, 1.0, 1.5],
            temperature_k: 2.0,
        }
    }
}

impl PowerParams {
    pub fn validate(&self) -> Result<(), PowerError> {
        if self.ek_values.is_empty() {
            return Err(PowerError::InvalidParams("no ek values".into()));
        }
        if let Some(ek) = self
            .ek_values
            .iter()
            .find(|e| !(e.is_finite() && **e > 0.0))
        {
            return Err(PowerError::InvalidParams(format!(
                "ek must be > 0, got {ek}"
            )));
        }
        if !(self.temperature_k.is_finite() && self.temperature_k > 0.0) {
            return Err(PowerError::InvalidParams(format!(
                "temperature must be > 0, got {}",
                self.temperature_k
            )));
        }
        Ok(())
    }
}

fn steady_state(gamma: f64, s: f64, temperature_k: f64) -> (f64, f64) {
    let (gx, gz) = (-2.0 * gamma, s);
    let norm = gx.hypot(gz);
    if norm == 0.0 {
        return (0.0, 0.0);
    }
    let scale = (norm / (2.0 * BOLTZMANN_MEV_PER_K * temperature_k)).tanh() / norm;
    (gx * scale, gz * scale)
}

/// Upper-bound dissipation (meV) of one event taking a cell from
/// `(gamma_before, s_before)` to `(gamma_after, s_after)`. Never negative.
pub fn event_dissipation(
    gamma_before: f64,
    s_before: f64,
    gamma_after: f64,
    s_after: f64,
    temperature_k: f64,
) -> f64 {
    let before = steady_state(gamma_before, s_before, temperature_k);
    let after = steady_state(gamma_after, s_after, temperature_k);
    let (gx, gz) = (-2.0 * gamma_after, s_after);
    (0.5 * (gx * (after.0 - before.0) + gz * (after.1 - before.1))).max(0.0)
}

/// [`event_dissipation`] at a fixed tunneling energy.
pub fn cell_dissipation(s_before: f64, s_after: f64, gamma: f64, temperature_k: f64) -> f64 {
    event_dissipation(gamma, s_before, gamma, s_after, temperature_k)
}

/// Switch and Release dissipation of one cell over a clock cycle that moves
/// its neighbour sum from `s_before` to `s_after` at `γ_high = ek`.
pub fn cycle_dissipation(s_before: f64, s_after: f64, ek: f64, temperature_k: f64) -> (f64, f64) {
    let low = ek * GAMMA_LOW_RATIO;
    (
        event_dissipation(ek, s_before, low, s_after, temperature_k),
        event_dissipation(low, s_after, ek, s_after, temperature_k),
    )
}

/// One cell's dissipation for one vector pair, split by event kind.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct CellEnergy {
    leakage: f64,
    switching: f64,
}

impl CellEnergy {
    fn total(self) -> f64 {
        self.leakage + self.switching
    }
}

/// Metrics for one tunneling energy. Energies are in meV; vector pairs are
/// labelled `before->after` with bits in input-name order.
#[derive(Debug, Clone, PartialEq)]
pub struct EkReport {
    pub ek: f64,
    pub max_kink_energy: f64,
    pub max_circuit_dissipation: f64,
    pub max_circuit_vector: String,
    pub avg_circuit_dissipation: f64,
    pub min_circuit_dissipation: f64,
    pub min_circuit_vector: String,
    pub max_cell_dissipation: f64,
    pub max_cell_id: String,
    pub max_cell_vector: String,
    pub avg_leakage: f64,
    pub avg_switching: f64,
    /// Mean dissipation of each cell over all vector pairs.
    pub per_cell: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerReport {
    pub temperature_k: f64,
    pub input_names: Vec<String>,
    pub rows: Vec<EkReport>,
}

fn label(bits: usize, width: usize) -> String {
    (0..width)
        .map(|k| {
            if bits >> (width - 1 - k) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Per-cell steady values for input assignment `bits`.
fn settle(sim: &Simulator<'_>, names: &[String], bits: usize) -> Result<Vec<f64>, PowerError> {
    let layout = sim.layout();
    let schedule = sim.schedule();
    let bound: BTreeMap<String, Polarization> = names
        .iter()
        .enumerate()
        .map(|(k, n)| {
            let one = bits >> (names.len() - 1 - k) & 1 == 1;
            (n.clone(), Polarization::new(if one { 1.0 } else { -1.0 }))
        })
        .collect();
    let pins = sim.pins(&bound)?;
    let n = layout.len();
    let threshold = 10.0 * layout.params.convergence_tolerance;
    let mut state = vec![0.0; n];
    let mut previous: Option<Vec<f64>> = None;
    let cycle = schedule.steps_per_cycle();
    for c in 0..MAX_SETTLE_CYCLES {
        let mut snapshot: Vec<f64> = pins.iter().map(|p| p.unwrap_or(0.0)).collect();
        for step in c * cycle..(c + 1) * cycle {
            sim.step(step, &pins, &mut state)?;
            if schedule.is_phase_end(step) {
                for (i, cell) in layout.cells().iter().enumerate() {
                    if pins[i].is_none() && schedule.phase(cell.zone, step) == Phase::Switch {
                        snapshot[i] = state[i];
                    }
                }
            }
        }
        if let Some(prev) = &previous {
            let delta = prev
                .iter()
                .zip(&snapshot)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if delta <= threshold {
                return Ok(snapshot);
            }
        }
        previous = Some(snapshot);
    }
    Err(PowerError::Unsettled {
        vector: label(bits, names.len()),
    })
}

/// Sweeps `params.ek_values` over every ordered pair of input vectors.
pub fn analyze(layout: &QcaLayout, params: &PowerParams) -> Result<PowerReport, PowerError> {
    let width = checked_width(layout)?;
    let count = 1usize << width;
    let pairs: Vec<(usize, usize)> = (0..count * count).map(|p| (p / count, p % count)).collect();
    analyze_pairs(layout, params, &pairs)
}

/// Like [`analyze`] but over the consecutive pairs of `vectors`, given as
/// bit strings in input-name order. A single vector is paired with itself.
pub fn analyze_sequence(
    layout: &QcaLayout,
    params: &PowerParams,
    vectors: &[String],
) -> Result<PowerReport, PowerError> {
    let width = checked_width(layout)?;
    let bits = vectors
        .iter()
        .map(|v| parse_vector(v, width))
        .collect::<Result<Vec<_>, _>>()?;
    let pairs: Vec<(usize, usize)> = match bits.as_slice() {
        [] => return Err(PowerError::InvalidVector("no vectors".into())),
        [only] => vec![(*only, *only)],
        _ => bits.windows(2).map(|w| (w[0], w[1])).collect(),
    };
    analyze_pairs(layout, params, &pairs)
}

fn checked_width(layout: &QcaLayout) -> Result<usize, PowerError> {
    let width = layout.input_names().len();
    if width > MAX_POWER_INPUTS {
        return Err(PowerError::TooManyInputs(width));
    }
    Ok(width)
}

fn parse_vector(text: &str, width: usize) -> Result<usize, PowerError> {
    if text.len() != width || !text.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(PowerError::InvalidVector(format!(
            "`{text}` is not a {width}-bit string"
        )));
    }
    Ok(text
        .bytes()
        .fold(0, |acc, b| acc << 1 | usize::from(b == b'1')))
}

fn analyze_pairs(
    layout: &QcaLayout,
    params: &PowerParams,
    pairs: &[(usize, usize)],
) -> Result<PowerReport, PowerError> {
    params.validate()?;
    let schedule = ClockSchedule::for_geometry(&layout.geometry);
    let sim = Simulator::new(layout, schedule)?;
    let names = layout.input_names();
    let width = names.len();

    let used: Vec<usize> = pairs
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let steady: BTreeMap<usize, Vec<f64>> = used
        .par_iter()
        .map(|&bits| settle(&sim, &names, bits).map(|s| (bits, s)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .collect();
    let pinned: Vec<bool> = layout.cells().iter().map(|c| c.kind.is_pinned()).collect();
    let sums: BTreeMap<usize, Vec<f64>> = steady
        .iter()
        .map(|(&v, s)| {
            (
                v,
                (0..layout.len()).map(|i| sim.neighbor_sum(i, s)).collect(),
            )
        })
        .collect();
    let logic: BTreeMap<usize, Vec<Logic>> = steady
        .iter()
        .map(|(&v, s)| (v, s.iter().map(|&p| Logic::from_polarization(p)).collect()))
        .collect();
    let inputs_change = |a: usize, b: usize, i: usize| {
        sim.neighbors(i)
            .iter()
            .any(|&(j, _)| logic[&a][j] != logic[&b][j])
    };
    let max_kink_energy = sim.max_kink_energy();

    let rows = params
        .ek_values
        .iter()
        .map(|&ek| {
            // cell_energy[pair][cell]
            let cell_energy: Vec<Vec<CellEnergy>> = pairs
                .par_iter()
                .map(|&(a, b)| {
                    let (sa, sb) = (&sums[&a], &sums[&b]);
                    (0..layout.len())
                        .map(|i| {
                            if pinned[i] {
                                return CellEnergy::default();
                            }
                            let (switch, release) =
                                cycle_dissipation(sa[i], sb[i], ek, params.temperature_k);
                            if inputs_change(a, b, i) {
                                CellEnergy {
                                    leakage: release,
                                    switching: switch,
                                }
                            } else {
                                CellEnergy {
                                    leakage: switch + release,
                                    switching: 0.0,
                                }
                            }
                        })
                        .collect()
                })
                .collect();
            summarize(layout, ek, max_kink_energy, width, pairs, &cell_energy)
        })
        .collect();

    Ok(PowerReport {
        temperature_k: params.temperature_k,
        input_names: names,
        rows,
    })
}

fn summarize(
    layout: &QcaLayout,
    ek: f64,
    max_kink_energy: f64,
    width: usize,
    pairs: &[(usize, usize)],
    cell_energy: &[Vec<CellEnergy>],
) -> EkReport {
    let pair_label = |k: usize| {
        let (a, b) = pairs[k];
        format!("{}->{}", label(a, width), label(b, width))
    };
    let totals: Vec<f64> = cell_energy
        .iter()
        .map(|cells| cells.iter().map(|e| e.total()).sum())
        .collect();
    let n = totals.len() as f64;

    let (mut max_pair, mut min_pair) = (0, 0);
    for (pair, &t) in totals.iter().enumerate() {
        if t > totals[max_pair] {
            max_pair = pair;
        }
        if t < totals[min_pair] {
            min_pair = pair;
        }
    }
    let (mut leakage, mut switching) = (0.0, 0.0);
    for e in cell_energy.iter().flatten() {
        leakage += e.leakage;
        switching += e.switching;
    }

    let (mut cell_pair, mut cell_index) = (0, 0);
    let mut cell_max = 0.0;
    for (pair, cells) in cell_energy.iter().enumerate() {
        for (i, e) in cells.iter().enumerate() {
            if e.total() > cell_max {
                cell_max = e.total();
                cell_pair = pair;
                cell_index = i;
            }
        }
    }
    let per_cell = layout
        .cells()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let sum: f64 = cell_energy.iter().map(|cells| cells[i].total()).sum();
            (c.id.clone(), sum / n)
        })
        .collect();

    let (avg_leakage, avg_switching) = (leakage / n, switching / n);
    EkReport {
        ek,
        max_kink_energy,
        max_circuit_dissipation: totals[max_pair],
        max_circuit_vector: pair_label(max_pair),
        avg_circuit_dissipation: avg_leakage + avg_switching,
        min_circuit_dissipation: totals[min_pair],
        min_circuit_vector: pair_label(min_pair),
        max_cell_dissipation: cell_max,
        max_cell_id: layout
            .cells()
            .get(cell_index)
            .map(|c| c.id.clone())
            .unwrap_or_default(),
        max_cell_vector: pair_label(cell_pair),
        avg_leakage,
        avg_switching,
        per_cell,
    }
}

/// `ek_meV,x,y,energy_meV`, one row per cell (layout order) per ek value.
pub fn dissipation_map_csv(report: &PowerReport, layout: &QcaLayout) -> Result<String, PowerError> {
    let mut out = String::from("ek_meV,x,y,energy_meV\n");
    for row in &report.rows {
        if row.per_cell.len() != layout.len() {
            return Err(PowerError::MismatchedReport(format!(
                "report has {} cells, layout {}",
                row.per_cell.len(),
                layout.len()
            )));
        }
        for cell in layout.cells() {
            let energy = row.per_cell.get(&cell.id).ok_or_else(|| {
                PowerError::MismatchedReport(format!("no entry for cell `{}`", cell.id))
            })?;
            let _ = writeln!(out, "{},{},{},{:.9}", row.ek, cell.x, cell.y, energy);
        }
    }
    Ok(out)
}

/// Published reference figures for one gate at one tunneling energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerReference {
    pub max_kink_energy: f64,
    pub max_circuit: f64,
    pub max_circuit_vector: &'static str,
    pub avg_circuit: f64,
    pub max_cell: f64,
    pub max_cell_vector: &'static str,
    pub min_circuit: f64,
    pub min_circuit_vector: &'static str,
    pub avg_leakage: f64,
    pub avg_switching: f64,
}

const fn reference(
    max_circuit: f64,
    avg_circuit: f64,
    max_cell: f64,
    min_circuit: f64,
    avg_leakage: f64,
    avg_switching: f64,
) -> PowerReference {
    PowerReference {
        max_kink_energy: 0.00148,
        max_circuit,
        max_circuit_vector: "20",
        avg_circuit,
        max_cell,
        max_cell_vector: "31",
        min_circuit,
        min_circuit_vector: "00",
        avg_leakage,
        avg_switching,
    }
}

const NAND_POWER: [(f64, PowerReference); 3] = [
    (
        0.5,
        reference(0.20704, 0.11131, 0.00785, 0.04493, 0.04629, 0.06502),
    ),
    (
        1.0,
        reference(0.27689, 0.19465, 0.00735, 0.13668, 0.13869, 0.05596),
    ),
    (
        1.5,
        reference(0.36453, 0.29388, 0.00707, 0.24430, 0.24638, 0.04750),
    ),
];

const NOR_POWER: [(f64, PowerReference); 3] = [
    (
        0.5,
        reference(0.21153, 0.11366, 0.00785, 0.04519, 0.04653, 0.06713),
    ),
    (
        1.0,
        reference(0.28150, 0.19734, 0.00735, 0.13754, 0.13953, 0.05781),
    ),
    (
        1.5,
        reference(0.36934, 0.29706, 0.00707, 0.24590, 0.24797, 0.04909),
    ),
];

/// Reference figures for `nand` or `nor` at ek 0.5, 1.0 or 1.5 meV.
pub fn power_reference(gate: &str, ek: f64) -> Option<PowerReference> {
    let table = match gate {
        "nand" => &NAND_POWER,
        "nor" => &NOR_POWER,
        _ => return None,
    };
    table
        .iter()
        .find(|(e, _)| (e - ek).abs() < 1e-9)
        .map(|(_, r)| *r)
}

const REPORT_COLUMNS: [&str; 10] = [
    "max_kink_energy",
    "max_energy_dissipation_of_circuit",
    "max_energy_dissipation_vector",
    "average_energy_dissipation_of_circuit",
    "max_energy_dissipation_among_all_cells",
    "max_cell_energy_dissipation_vector",
    "min_energy_dissipation_of_circuit",
    "min_energy_dissipation_vector",
    "average_leakage_energy_dissipation",
    "average_switching_energy_dissipation",
];

/// One row per `(gate, ek)`, then `ref_` companion columns that are empty
/// when no reference exists.
pub fn report_csv(reports: &[(String, PowerReport)]) -> String {
    let mut out = String::from("gate,ek_mev,temperature_k");
    for c in REPORT_COLUMNS {
        let _ = write!(out, ",{c}");
    }
    for c in REPORT_COLUMNS {
        let _ = write!(out, ",ref_{c}");
    }
    out.push_str(",max_cell_id\n");
    for (gate, report) in reports {
        for r in &report.rows {
            let _ = write!(out, "{gate},{},{}", r.ek, report.temperature_k);
            let _ = write!(
                out,
                ",{:.9},{:.9},{},{:.9},{:.9},{},{:.9},{},{:.9},{:.9}",
                r.max_kink_energy,
                r.max_circuit_dissipation,
                r.max_circuit_vector,
                r.avg_circuit_dissipation,
                r.max_cell_dissipation,
                r.max_cell_vector,
                r.min_circuit_dissipation,
                r.min_circuit_vector,
                r.avg_leakage,
                r.avg_switching,
            );
            match power_reference(gate, r.ek) {
                Some(p) => {
                    let _ = write!(
                        out,
                        ",{},{},{},{},{},{},{},{},{},{}",
                        p.max_kink_energy,
                        p.max_circuit,
                        p.max_circuit_vector,
                        p.avg_circuit,
                        p.max_cell,
                        p.max_cell_vector,
                        p.min_circuit,
                        p.min_circuit_vector,
                        p.avg_leakage,
                        p.avg_switching,
                    );
                }
                None => out.push_str(&",".repeat(REPORT_COLUMNS.len())),
            }
            let _ = writeln!(out, ",{}", r.max_cell_id);
        }
    }
    out
}

/// Direction of each average across consecutive ek values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trends {
    pub total_increasing: bool,
    pub leakage_increasing: bool,
    pub switching_decreasing: bool,
    /// Largest `|leakage + switching - total|` over all rows.
    pub decomposition_error: f64,
}

/// Trends over `report.rows` in the order given.
pub fn trends(report: &PowerReport) -> Trends {
    let rows = &report.rows;
    let rising = |f: fn(&EkReport) -> f64| rows.windows(2).all(|w| f(&w[1]) > f(&w[0]));
    Trends {
        total_increasing: rising(|r| r.avg_circuit_dissipation),
        leakage_increasing: rising(|r| r.avg_leakage),
        switching_decreasing: rows
            .windows(2)
            .all(|w| w[1].avg_switching < w[0].avg_switching),
        decomposition_error: rows
            .iter()
            .map(|r| (r.avg_leakage + r.avg_switching - r.avg_circuit_dissipation).abs())
            .fold(0.0, f64::max),
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Physical-layer QCA simulation.

mod clock;
mod engine;
mod format;
mod geometry;
mod layout;
pub mod library;

pub use clock::{ClockSchedule, Phase};
pub use engine::{
    bistable_update, relax, run, run_with, InputVector, RelaxOutcome, RunOptions, Simulator,
    TraceRow, TraceSet,
};
pub use format::{parse_layout, write_layout};
pub use geometry::{kink_energy, Geometry, COULOMB_MEV_NM, RELATIVE_PERMITTIVITY};
pub use layout::{CellKind, Logic, Polarization, QcaCell, QcaLayout, Rotation, SimParams};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QcaError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("clock zone {0} outside 0..=3")]
    InvalidZone(u8),
    #[error("invalid cell id `{0}`")]
    InvalidId(String),
    #[error("duplicate cell id `{0}`")]
    DuplicateId(String),
    #[error("two cells at ({0}, {1})")]
    Overlap(i32, i32),
    #[error("port name `{0}` used twice")]
    DuplicatePort(String),
    #[error("cells {distance_nm:.1} nm apart exceed the {radius_nm:.1} nm radius of effect")]
    OutOfRange { distance_nm: f64, radius_nm: f64 },
    #[error("input `{0}` is not bound")]
    UnboundInput(String),
    #[error("no input named `{0}`")]
    UnknownInput(String),
    #[error("no convergence at step {step}: cell `{cell}` still moving by {delta:.3e}")]
    NoConvergence {
        step: usize,
        cell: String,
        delta: f64,
    },
}

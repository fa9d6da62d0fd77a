// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use super::geometry::Geometry;
use super::QcaError;

/// Cell polarization, always within `[-1, +1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Polarization(f64);

impl Polarization {
    pub const ONE: Polarization = Polarization(1.0);
    pub const ZERO: Polarization = Polarization(0.0);
    pub const MINUS_ONE: Polarization = Polarization(-1.0);

    /// Clamps into `[-1, +1]`; NaN maps to 0.
    pub fn new(p: f64) -> Self {
        if p.is_nan() {
            Polarization(0.0)
        } else {
            Polarization(p.clamp(-1.0, 1.0))
        }
    }

    pub fn from_bit(bit: crate::Bit) -> Self {
        if bit.is_set() {
            Polarization::ONE
        } else {
            Polarization::MINUS_ONE
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn decode(self) -> Logic {
        Logic::from_polarization(self.0)
    }
}

impl std::ops::Neg for Polarization {
    type Output = Polarization;
    fn neg(self) -> Polarization {
        Polarization(-self.0)
    }
}

/// Logical reading of a polarization with a ±0.5 threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Logic {
    Zero,
    One,
    Indeterminate,
}

impl Logic {
    pub fn from_polarization(p: f64) -> Self {
        if p >= 0.5 {
            Logic::One
        } else if p <= -0.5 {
            Logic::Zero
        } else {
            Logic::Indeterminate
        }
    }

    pub fn bit(self) -> Option<crate::Bit> {
        match self {
            Logic::Zero => Some(crate::Bit::ZERO),
            Logic::One => Some(crate::Bit::ONE),
            Logic::Indeterminate => None,
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::Zero => "0",
            Logic::One => "1",
            Logic::Indeterminate => "X",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellKind {
    Normal,
    FixedInput(Polarization),
    NamedInput(String),
    NamedOutput(String),
}

impl CellKind {
    pub fn is_pinned(&self) -> bool {
        matches!(self, CellKind::FixedInput(_) | CellKind::NamedInput(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Rotation {
    #[default]
    Standard,
    Rotated45,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QcaCell {
    pub id: String,
    pub x: i32,
    pub y: i32,
    pub zone: u8,
    pub kind: CellKind,
    pub rotation: Rotation,
}

impl QcaCell {
    pub fn new(id: impl Into<String>, x: i32, y: i32, zone: u8, kind: CellKind) -> Self {
        QcaCell {
            id: id.into(),
            x,
            y,
            zone,
            kind,
            rotation: Rotation::Standard,
        }
    }

    pub fn position(&self) -> (i32, i32) {
        (self.x, self.y)
    }
}

/// Simulation knobs that are not part of the clock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    pub radius_of_effect_nm: f64,
    pub convergence_tolerance: f64,
    pub max_iterations_per_step: usize,
    pub temperature_k: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            radius_of_effect_nm: 65.0,
            convergence_tolerance: 1e-3,
            max_iterations_per_step: 10_000,
            temperature_k: 2.0,
        }
    }
}

impl SimParams {
    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self, geometry: &Geometry) -> Result<(), QcaError> {
        if !(self.convergence_tolerance > 0.0) {
            return Err(QcaError::InvalidParams(
                "convergence_tolerance must be > 0".into(),
            ));
        }
        if !(self.radius_of_effect_nm >= geometry.pitch_nm) {
            return Err(QcaError::InvalidParams(
                "radius_of_effect must be >= pitch".into(),
            ));
        }
        if self.max_iterations_per_step == 0 {
            return Err(QcaError::InvalidParams(
                "max_iterations_per_step must be > 0".into(),
            ));
        }
        if !(self.temperature_k > 0.0) {
            return Err(QcaError::InvalidParams("temperature must be > 0".into()));
        }
        Ok(())
    }
}

/// A physical circuit: cells on an integer grid in units of the pitch.
#[derive(Debug, Clone, PartialEq)]
pub struct QcaLayout {
    cells: Vec<QcaCell>,
    pub geometry: Geometry,
    pub params: SimParams,
}

impl Default for QcaLayout {
    fn default() -> Self {
        QcaLayout::new(Geometry::default(), SimParams::default())
    }
}

impl QcaLayout {
    pub fn new(geometry: Geometry, params: SimParams) -> Self {
        QcaLayout {
            cells: Vec::new(),
            geometry,
            params,
        }
    }

    pub fn cells(&self) -> &[QcaCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Adds a cell, rejecting duplicate ids, positions and port names.
    pub fn add(&mut self, cell: QcaCell) -> Result<(), QcaError> {
        if cell.zone > 3 {
            return Err(QcaError::InvalidZone(cell.zone));
        }
        if cell.id.is_empty() || cell.id.chars().any(char::is_whitespace) {
            return Err(QcaError::InvalidId(cell.id));
        }
        if let CellKind::FixedInput(p) = cell.kind {
            if !(-1.0..=1.0).contains(&p.value()) {
                return Err(QcaError::InvalidParams(format!(
                    "fixed polarization {}",
                    p.value()
                )));
            }
        }
        for other in &self.cells {
            if other.id == cell.id {
                return Err(QcaError::DuplicateId(cell.id));
            }
            if other.position() == cell.position() {
                return Err(QcaError::Overlap(cell.x, cell.y));
            }
            if let (Some(a), Some(b)) = (port_name(&other.kind), port_name(&cell.kind)) {
                if a == b {
                    return Err(QcaError::DuplicatePort(a.to_string()));
                }
            }
        }
        self.cells.push(cell);
        Ok(())
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.id == id)
    }

    /// Named inputs in layout order.
    pub fn input_names(&self) -> Vec<String> {
        self.cells
            .iter()
            .filter_map(|c| match &c.kind {
                CellKind::NamedInput(n) => Some(n.clone()),
                _ => None,
            })
            .collect()
    }

    /// Named outputs in layout order.
    pub fn output_names(&self) -> Vec<String> {
        self.cells
            .iter()
            .filter_map(|c| match &c.kind {
                CellKind::NamedOutput(n) => Some(n.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn port_index(&self, name: &str) -> Option<usize> {
        self.cells
            .iter()
            .position(|c| port_name(&c.kind) == Some(name))
    }

    /// Inclusive grid bounding box `(min_x, min_y, max_x, max_y)`.
    pub fn bounds(&self) -> Option<(i32, i32, i32, i32)> {
        let first = self.cells.first()?;
        Some(self.cells.iter().fold(
            (first.x, first.y, first.x, first.y),
            |(x0, y0, x1, y1), c| (x0.min(c.x), y0.min(c.y), x1.max(c.x), y1.max(c.y)),
        ))
    }

    /// Shifts every cell by `(dx, dy)`.
    pub fn translate(&mut self, dx: i32, dy: i32) {
        for c in &mut self.cells {
            c.x += dx;
            c.y += dy;
        }
    }

    /// Outputs that are not connected to any input through pairs of cells
    /// within the radius of effect.
    pub fn connectivity_warnings(&self) -> Vec<String> {
        let n = self.cells.len();
        let radius = self.params.radius_of_effect_nm;
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> =
            (0..n).filter(|&i| self.cells[i].kind.is_pinned()).collect();
        for &i in &queue {
            seen[i] = true;
        }
        while let Some(i) = queue.pop_front() {
            let origin = self.cells[i].position();
            for (j, cell) in self.cells.iter().enumerate() {
                if !seen[j] && self.geometry.distance_nm(origin, cell.position()) <= radius {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        self.cells
            .iter()
            .zip(&seen)
            .filter_map(|(c, &reached)| match &c.kind {
                CellKind::NamedOutput(name) if !reached => {
                    Some(format!("output `{name}` is not reachable from any input"))
                }
                _ => None,
            })
            .collect()
    }

    /// Cell counts per kind, keyed by a short label.
    pub fn kind_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut out = BTreeMap::new();
        for c in &self.cells {
            let key = match c.kind {
                CellKind::Normal => "normal",
                CellKind::FixedInput(_) => "fixed",
                CellKind::NamedInput(_) => "in",
                CellKind::NamedOutput(_) => "out",
            };
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }
}

pub(crate) fn port_name(kind: &CellKind) -> Option<&str> {
    match kind {
        CellKind::NamedInput(n) | CellKind::NamedOutput(n) => Some(n),
        _ => None,
    }
}

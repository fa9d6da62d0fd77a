// SPDX-License-Identifier: Apache-2.0

//! Functional model of Akers rectangular logic arrays.
//!
//! Every array cell computes `F = X·Z̄ + Y·Z`: a two-way multiplexer whose
//! select line `Z` is the cell's stored control bit. `X` arrives from the cell
//! above and `Y` from the cell to the left; the top row sees `X = 0`, the left
//! column sees `Y = 1`, and the circuit output is read at the lower-right cell.
//!
//! A cell's output is fanned out unchanged to both its right and lower
//! neighbours, so evaluation is a single row-major pass.

mod builders;
mod netlist;
mod primitive;
mod truth_table;

pub use builders::{
    build_and_chain, build_nand, build_nor, build_or_column, build_xor, input_name, MAX_XOR_ARITY,
};
pub use netlist::{parse_netlist, write_netlist};
pub use primitive::{switch_eval, validate_primitive, write_primitive, PrimitiveCellState};
pub use truth_table::{truth_table, truth_table_with, TruthTable, MAX_TABLE_VARS};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Not;

use thiserror::Error;

/// A binary logic value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Bit(bool);

impl Bit {
    pub const ZERO: Bit = Bit(false);
    pub const ONE: Bit = Bit(true);

    pub const fn new(value: bool) -> Self {
        Bit(value)
    }

    pub const fn is_set(self) -> bool {
        self.0
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(Bit::ZERO),
            '1' => Some(Bit::ONE),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        if self.0 {
            '1'
        } else {
            '0'
        }
    }
}

impl From<bool> for Bit {
    fn from(value: bool) -> Self {
        Bit(value)
    }
}

impl From<Bit> for bool {
    fn from(bit: Bit) -> Self {
        bit.0
    }
}

impl Not for Bit {
    type Output = Bit;

    fn not(self) -> Bit {
        Bit(!self.0)
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Where a cell's control input `Z` comes from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ZSource {
    /// A programmed constant.
    Const(Bit),
    /// A circuit input variable.
    Var(String),
    /// The complement of a circuit input variable, taken from the primitive
    /// cell's `Q̄z` side.
    NotVar(String),
    /// A bit written into the array before execution.
    Stored(usize),
}

impl ZSource {
    pub fn var(name: impl Into<String>) -> Self {
        ZSource::Var(name.into())
    }

    pub fn not_var(name: impl Into<String>) -> Self {
        ZSource::NotVar(name.into())
    }

    pub fn variable_name(&self) -> Option<&str> {
        match self {
            ZSource::Var(name) | ZSource::NotVar(name) => Some(name),
            _ => None,
        }
    }
}

/// Variable bindings used when evaluating a grid.
pub type Assignment = BTreeMap<String, Bit>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AkersError {
    #[error("both flip-flop clocks of a primitive cell are active")]
    BothClocksActive,
    #[error("primitive cell holds qz = qz_bar")]
    NonComplementaryState,
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("stored bit {0} was not supplied")]
    MissingStoredBit(usize),
    #[error("xor arity {0} outside 2..={max}", max = MAX_XOR_ARITY)]
    ArityOutOfRange(usize),
    #[error("{0} variables exceed the truth-table limit of {max}", max = MAX_TABLE_VARS)]
    TooManyVariables(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// A rectangular Akers array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AkersGrid {
    rows: usize,
    cols: usize,
    z: Vec<ZSource>,
    invert_output: bool,
}

impl AkersGrid {
    /// Builds a grid from row-major `Z` sources.
    pub fn new(
        rows: usize,
        cols: usize,
        z: Vec<ZSource>,
        invert_output: bool,
    ) -> Result<Self, AkersError> {
        if rows == 0 || cols == 0 {
            return Err(AkersError::InvalidGrid(format!(
                "dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if z.len() != rows * cols {
            return Err(AkersError::InvalidGrid(format!(
                "{rows}x{cols} grid needs {} cells, got {}",
                rows * cols,
                z.len()
            )));
        }
        let mut stored = BTreeSet::new();
        for source in &z {
            match source {
                ZSource::Var(name) | ZSource::NotVar(name) => {
                    if !is_identifier(name) {
                        return Err(AkersError::InvalidGrid(format!(
                            "bad variable name `{name}`"
                        )));
                    }
                }
                ZSource::Stored(index) => {
                    stored.insert(*index);
                }
                ZSource::Const(_) => {}
            }
        }
        if let Some(&last) = stored.iter().next_back() {
            if last + 1 != stored.len() {
                return Err(AkersError::InvalidGrid(format!(
                    "stored indices must be dense 0..{}, highest is {last}",
                    stored.len()
                )));
            }
        }
        Ok(AkersGrid {
            rows,
            cols,
            z,
            invert_output,
        })
    }

    /// Builds a grid from a row-major slice of rows.
    pub fn from_rows(rows: Vec<Vec<ZSource>>, invert_output: bool) -> Result<Self, AkersError> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(AkersError::InvalidGrid("ragged rows".into()));
        }
        AkersGrid::new(
            height,
            width,
            rows.into_iter().flatten().collect(),
            invert_output,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn invert_output(&self) -> bool {
        self.invert_output
    }

    pub fn z(&self, row: usize, col: usize) -> &ZSource {
        &self.z[row * self.cols + col]
    }

    pub fn sources(&self) -> &[ZSource] {
        &self.z
    }

    /// Variable names in order of first appearance, row-major. This is the
    /// variable order used by truth tables (first name = most significant).
    pub fn variables(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for name in self.z.iter().filter_map(ZSource::variable_name) {
            if seen.insert(name) {
                out.push(name.to_string());
            }
        }
        out
    }

    /// Number of stored bits the grid expects.
    pub fn stored_count(&self) -> usize {
        self.z
            .iter()
            .filter_map(|s| match s {
                ZSource::Stored(i) => Some(i + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Resolves every cell's control bit for one input assignment.
    pub fn resolve_controls(
        &self,
        vars: &Assignment,
        stored: &[Bit],
    ) -> Result<Vec<Bit>, AkersError> {
        self.z
            .iter()
            .map(|source| resolve(source, vars, stored))
            .collect()
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
}

fn resolve(source: &ZSource, vars: &Assignment, stored: &[Bit]) -> Result<Bit, AkersError> {
    match source {
        ZSource::Const(b) => Ok(*b),
        ZSource::Var(name) => vars
            .get(name)
            .copied()
            .ok_or_else(|| AkersError::UnboundVariable(name.clone())),
        ZSource::NotVar(name) => vars
            .get(name)
            .map(|b| !*b)
            .ok_or_else(|| AkersError::UnboundVariable(name.clone())),
        ZSource::Stored(i) => stored
            .get(*i)
            .copied()
            .ok_or(AkersError::MissingStoredBit(*i)),
    }
}

/// One Akers cell: `x·z̄ + y·z`.
pub fn akers_eval(x: Bit, y: Bit, z: Bit) -> Bit {
    Bit((x.0 && !z.0) || (y.0 && z.0))
}

/// Result of evaluating a grid: the (possibly inverted) output and the full
/// row-major matrix of cell outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridEval {
    pub output: Bit,
    pub cols: usize,
    pub f: Vec<Bit>,
}

impl GridEval {
    pub fn at(&self, row: usize, col: usize) -> Bit {
        self.f[row * self.cols + col]
    }

    /// Inputs `(x, y)` a cell sees, given the boundary convention.
    pub fn inputs_of(&self, row: usize, col: usize) -> (Bit, Bit) {
        let x = if row == 0 {
            Bit::ZERO
        } else {
            self.at(row - 1, col)
        };
        let y = if col == 0 {
            Bit::ONE
        } else {
            self.at(row, col - 1)
        };
        (x, y)
    }
}

/// Evaluates a grid with `Z` resolved from `vars` and `stored`.
pub fn grid_eval(
    grid: &AkersGrid,
    vars: &Assignment,
    stored: &[Bit],
) -> Result<GridEval, AkersError> {
    let controls = grid.resolve_controls(vars, stored)?;
    Ok(propagate(grid, |idx, x, y| akers_eval(x, y, controls[idx])))
}

/// Stage 1 of in-memory operation: writes each cell's resolved control bit
/// into its pair of complementary flip-flops.
pub fn write_array(
    grid: &AkersGrid,
    vars: &Assignment,
    stored: &[Bit],
) -> Result<Vec<PrimitiveCellState>, AkersError> {
    Ok(grid
        .resolve_controls(vars, stored)?
        .into_iter()
        .map(write_primitive)
        .collect())
}

/// Stage 2: evaluates the array using the flip-flop switch model of each
/// written cell.
pub fn execute_array(
    grid: &AkersGrid,
    states: &[PrimitiveCellState],
) -> Result<GridEval, AkersError> {
    if states.len() != grid.cell_count() {
        return Err(AkersError::InvalidGrid(format!(
            "{} primitive states for {} cells",
            states.len(),
            grid.cell_count()
        )));
    }
    for state in states {
        validate_primitive(state)?;
    }
    Ok(propagate(grid, |idx, x, y| {
        switch_eval(x, y, &states[idx]).expect("validated above")
    }))
}

/// Write followed by execute: the switch-model route to the same result as
/// [`grid_eval`].
pub fn grid_eval_switched(
    grid: &AkersGrid,
    vars: &Assignment,
    stored: &[Bit],
) -> Result<GridEval, AkersError> {
    let states = write_array(grid, vars, stored)?;
    execute_array(grid, &states)
}

fn propagate(grid: &AkersGrid, mut cell: impl FnMut(usize, Bit, Bit) -> Bit) -> GridEval {
    let (rows, cols) = (grid.rows, grid.cols);
    let mut f = vec![Bit::ZERO; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            let x = if i == 0 {
                Bit::ZERO
            } else {
                f[(i - 1) * cols + j]
            };
            let y = if j == 0 {
                Bit::ONE
            } else {
                f[i * cols + j - 1]
            };
            f[i * cols + j] = cell(i * cols + j, x, y);
        }
    }
    let last = f[rows * cols - 1];
    GridEval {
        output: if grid.invert_output { !last } else { last },
        cols,
        f,
    }
}

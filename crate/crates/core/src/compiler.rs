// SPDX-License-Identifier: Apache-2.0

//! Lowering of Akers arrays to clocked QCA layouts.
//!
//! Every Akers cell becomes one square tile. The upper-left part of a tile
//! holds two flip-flop cores with their enable tied high: one stores Z, the
//! other stores its complement through a diagonal inverter on the write
//! path. Their outputs drive a three-majority multiplexer
//!
//! ```text
//! F = MAJ(MAJ(X, !Z, 0), MAJ(Y, Z, 0), 1)
//! ```
//!
//! whose result fans out to the right (next tile's Y) and downwards (next
//! tile's X). Tile `(r, c)` has its clock zones shifted by `(r + c) mod 4`.
//! Wires advance one zone every few cells; the path from a tile's X/Y
//! entries to its F exits crosses eight zone boundaries, so entering the
//! next tile adds one more and the shift stays consistent.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::akers::{truth_table_with, AkersGrid, Assignment, Bit, ZSource};
use crate::qca::library::from_ascii;
use crate::qca::{
    run, CellKind, ClockSchedule, InputVector, Logic, Polarization, QcaCell, QcaError, QcaLayout,
};

/// Largest grid [`compile`] accepts.
pub const MAX_COMPILE_CELLS: usize = 16;

/// Name of the compiled gate's output port.
pub const OUTPUT_NAME: &str = "out";

const TILE: i32 = 19;

/// Flip-flop with enable tied high; D enters through the top two cells,
/// which share the D cell's zone so the gate centers diagonal to them are
/// already relaxed when they switch.
const FLIPFLOP_CORE: &str = "
    .  .  .  n1 .  .  .
    .  .  +0 n1 -0 .  .
    .  -0 n2 n1 n2 +0 .
    .  .  n3 .  n3 .  .
    .  .  n3 .  n3 .  .
    .  .  n3 n3 n0 n1 n1
    .  .  .  .  n3 .  n1
    .  .  .  .  n3 n2 n2
    .  .  .  .  .  n2 .
";

/// Zone shift of the flip-flop cores inside a tile.
const FLIPFLOP_SHIFT: u8 = 3;

/// Longest run of cells placed in one clock zone on a tile wire. Longer
/// runs let weak side couplings polarize the far end before the driver's
/// signal arrives, leaving a kink in the wire.
const SEGMENT: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompileError {
    #[error("grid has {0} cells; at most {MAX_COMPILE_CELLS} can be compiled")]
    TooLarge(usize),
    #[error("routing failure: {0}")]
    RoutingFailure(String),
    #[error("layout has no cells")]
    EmptyLayout,
    #[error("no value for `{0}`")]
    MissingValue(String),
    #[error(transparent)]
    Qca(#[from] QcaError),
}

/// What drives one input pin of a compiled gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PinSource {
    Var(String),
    Stored(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pin {
    pub name: String,
    pub source: PinSource,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledGate {
    pub layout: QcaLayout,
    pub source: AkersGrid,
    pub cell_count: usize,
    pub footprint_um2: f64,
    /// Pin names in tile order.
    pub input_names: Vec<String>,
    pub output_name: String,
    pub pins: Vec<Pin>,
    /// Clock cycles per vector needed for the output to settle.
    pub min_cycles: usize,
}

impl CompiledGate {
    /// Pin binding for one assignment of the source grid's variables and
    /// stored bits.
    pub fn input_vector(
        &self,
        vars: &Assignment,
        stored: &[Bit],
    ) -> Result<InputVector, CompileError> {
        self.pins
            .iter()
            .map(|pin| {
                let bit = match &pin.source {
                    PinSource::Var(v) => vars.get(v).copied(),
                    PinSource::Stored(i) => stored.get(*i).copied(),
                }
                .ok_or_else(|| {
                    CompileError::MissingValue(match &pin.source {
                        PinSource::Var(v) => v.clone(),
                        PinSource::Stored(i) => format!("stored bit {i}"),
                    })
                })?;
                Ok((pin.name.clone(), bit))
            })
            .collect()
    }

    /// Simulates every assignment of the source variables (in truth-table
    /// order) and returns the decoded output per row.
    pub fn physical_truth_table(&self, stored: &[Bit]) -> Result<Vec<Logic>, CompileError> {
        if stored.len() < self.source.stored_count() {
            return Err(CompileError::MissingValue(format!(
                "stored bit {}",
                stored.len()
            )));
        }
        let table = truth_table_with(&self.source, stored).map_err(|e| {
            CompileError::RoutingFailure(format!("source grid cannot be evaluated: {e}"))
        })?;
        let vectors = (0..table.outputs.len())
            .map(|i| self.input_vector(&table.assignment(i), stored))
            .collect::<Result<Vec<_>, _>>()?;
        let schedule = ClockSchedule::for_geometry(&self.layout.geometry);
        let trace = run(&self.layout, &schedule, &vectors, self.min_cycles)?;
        Ok(trace.decoded_output(&self.output_name))
    }
}

/// Bounding-box metrics of a layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Footprint {
    pub cell_count: usize,
    pub width_nm: f64,
    pub height_nm: f64,
    pub area_um2: f64,
}

/// Width and height are the pitch-based extents `(max - min + 1) × pitch`.
pub fn footprint(layout: &QcaLayout) -> Result<Footprint, CompileError> {
    let (min_x, min_y, max_x, max_y) = layout.bounds().ok_or(CompileError::EmptyLayout)?;
    let pitch = layout.geometry.pitch_nm;
    let width_nm = f64::from(max_x - min_x + 1) * pitch;
    let height_nm = f64::from(max_y - min_y + 1) * pitch;
    Ok(Footprint {
        cell_count: layout.len(),
        width_nm,
        height_nm,
        area_um2: width_nm * height_nm * 1e-6,
    })
}

/// Places cells of one tile relative to its origin and base zone.
struct Placer<'a> {
    layout: &'a mut QcaLayout,
    prefix: String,
    origin: (i32, i32),
    base: u8,
}

impl Placer<'_> {
    fn put(&mut self, (x, y): (i32, i32), zone: u8, kind: CellKind) -> Result<(), CompileError> {
        let (gx, gy) = (self.origin.0 + x, self.origin.1 + y);
        let cell = QcaCell::new(
            format!("{}.{x}.{y}", self.prefix),
            gx,
            gy,
            (self.base + zone) % 4,
            kind,
        );
        self.layout
            .add(cell)
            .map_err(|e| CompileError::RoutingFailure(e.to_string()))
    }

    fn wire(&mut self, points: &[(i32, i32)], zone: u8) -> Result<(), CompileError> {
        for &p in points {
            self.put(p, zone, CellKind::Normal)?;
        }
        Ok(())
    }

    /// A wire that ends in `last_zone`, stepping one zone every
    /// [`SEGMENT`] cells counted back from its end.
    fn staged(&mut self, points: &[(i32, i32)], last_zone: u8) -> Result<(), CompileError> {
        let n = points.len();
        for (i, &p) in points.iter().enumerate() {
            let back = u8::try_from(((n - 1 - i) / SEGMENT) % 4).expect("< 4");
            self.put(p, (last_zone + 4 - back) % 4, CellKind::Normal)?;
        }
        Ok(())
    }

    fn fixed(&mut self, p: (i32, i32), bit: bool) -> Result<(), CompileError> {
        self.put(
            p,
            0,
            CellKind::FixedInput(Polarization::from_bit(Bit::new(bit))),
        )
    }
}

fn row(y: i32, xs: std::ops::RangeInclusive<i32>) -> Vec<(i32, i32)> {
    xs.map(|x| (x, y)).collect()
}

fn col(x: i32, ys: std::ops::RangeInclusive<i32>) -> Vec<(i32, i32)> {
    ys.map(|y| (x, y)).collect()
}

#[derive(Debug, Clone, Copy)]
struct TileShape {
    top: bool,
    left: bool,
    exit_right: bool,
    exit_down: bool,
}

/// Emits one tile. `driver` is the kind of the Z write cell.
fn place_tile(
    p: &mut Placer<'_>,
    core: &QcaLayout,
    driver: CellKind,
    complemented: bool,
    shape: TileShape,
) -> Result<(), CompileError> {
    // Z write path: straight into the left core, one diagonal step into the
    // right core. A complemented source swaps the two branches.
    let (pin, straight, across, diagonal) = if complemented {
        ((10, 0), (10, 1), row(0, 4..=9), (3, 1))
    } else {
        ((3, 0), (3, 1), row(0, 4..=9), (10, 1))
    };
    p.put(pin, 3, driver)?;
    p.wire(&across, 3)?;
    p.wire(&[straight, diagonal], 0)?;

    // Z core at (0, 2), complement core at (7, 2).
    for (dx, dy) in [(0, 2), (7, 2)] {
        for c in core.cells() {
            p.put(
                (c.x + dx, c.y + dy),
                (c.zone + FLIPFLOP_SHIFT) % 4,
                c.kind.clone(),
            )?;
        }
    }

    // Core outputs to the multiplexer inputs, arriving in the base zone.
    p.wire(&[(12, 11)], 2)?;
    p.wire(&[(12, 12), (13, 12)], 3)?;
    p.wire(&[(14, 12)], 0)?;
    let mut z = col(5, 11..=14);
    z.extend(row(14, 6..=12));
    z.push((12, 15));
    p.staged(&z, 0)?;

    // X entry, or the constant 0 on the top boundary.
    if shape.top {
        p.fixed((15, 11), false)?;
    } else {
        let mut x = vec![(17, 0), (16, 0)];
        x.extend(col(15, 0..=11));
        p.staged(&x, 0)?;
    }
    // Y entry, or the constant 1 on the left boundary.
    if shape.left {
        p.fixed((11, 16), true)?;
    } else {
        p.staged(&row(16, 0..=11), 0)?;
    }

    // X·!Z
    p.wire(&[(15, 12)], 1)?;
    p.fixed((16, 12), false)?;
    p.wire(&col(15, 13..=14), 1)?;
    p.wire(&[(15, 15)], 2)?;
    // Y·Z
    p.wire(&[(12, 16)], 1)?;
    p.fixed((12, 17), false)?;
    p.wire(&[(13, 16)], 1)?;
    p.wire(&[(14, 16)], 2)?;
    // OR and fan-out. The last arm cells switch with the OR gate so the
    // fan-out, still releasing the previous value, never sits diagonal to
    // a switching arm.
    p.wire(&[(15, 16)], 2)?;
    p.fixed((15, 17), true)?;
    p.wire(&[(16, 16)], 3)?;
    p.wire(&[(17, 16)], 0)?;
    if shape.exit_right {
        p.wire(&[(18, 16)], 1)?;
    }
    if shape.exit_down {
        p.wire(&[(17, 17), (17, 18)], 1)?;
    }
    Ok(())
}

/// Compiles `grid` into a clocked layout whose decoded output equals the
/// grid's truth table.
pub fn compile(grid: &AkersGrid) -> Result<CompiledGate, CompileError> {
    let (rows, cols) = (grid.rows(), grid.cols());
    if rows * cols > MAX_COMPILE_CELLS {
        return Err(CompileError::TooLarge(rows * cols));
    }
    let core = from_ascii(FLIPFLOP_CORE, &[])?;
    let mut layout = QcaLayout::default();
    let mut pins: Vec<Pin> = Vec::new();
    let mut uses: BTreeMap<String, usize> = BTreeMap::new();

    for r in 0..rows {
        for c in 0..cols {
            let last = r + 1 == rows && c + 1 == cols;
            let shape = TileShape {
                top: r == 0,
                left: c == 0,
                exit_right: c + 1 < cols || last,
                exit_down: r + 1 < rows,
            };
            let (driver, complemented) = match grid.z(r, c) {
                ZSource::Const(b) => (CellKind::FixedInput(Polarization::from_bit(*b)), false),
                ZSource::Var(v) | ZSource::NotVar(v) => {
                    let n = uses.entry(v.clone()).or_insert(0);
                    let name = if *n == 0 {
                        v.clone()
                    } else {
                        format!("{v}.{n}")
                    };
                    *n += 1;
                    pins.push(Pin {
                        name: name.clone(),
                        source: PinSource::Var(v.clone()),
                    });
                    let complemented = matches!(grid.z(r, c), ZSource::NotVar(_));
                    (CellKind::NamedInput(name), complemented)
                }
                ZSource::Stored(i) => {
                    let name = format!("mem{i}");
                    pins.push(Pin {
                        name: name.clone(),
                        source: PinSource::Stored(*i),
                    });
                    (CellKind::NamedInput(name), false)
                }
            };
            let (ri, ci) = (to_i32(r)?, to_i32(c)?);
            let mut placer = Placer {
                layout: &mut layout,
                prefix: format!("t{r}_{c}"),
                origin: (ci * TILE, ri * TILE),
                base: u8::try_from((r + c) % 4).expect("zone < 4"),
            };
            place_tile(&mut placer, &core, driver, complemented, shape)?;
        }
    }

    // Output stage to the right of the last tile's F exit.
    let last_base = u8::try_from((rows + cols - 2) % 4).expect("zone < 4");
    let mut out = Placer {
        layout: &mut layout,
        prefix: "out".to_string(),
        origin: (to_i32(cols)? * TILE, to_i32(rows - 1)? * TILE + 16),
        base: last_base,
    };
    let output = CellKind::NamedOutput(OUTPUT_NAME.to_string());
    if grid.invert_output() {
        out.wire(&[(0, 0), (1, 0), (1, -1), (2, -1), (1, 1), (2, 1)], 2)?;
        out.put((3, 0), 3, output)?;
    } else {
        out.wire(&[(0, 0), (1, 0)], 2)?;
        out.put((2, 0), 2, output)?;
    }

    let fp = footprint(&layout)?;
    Ok(CompiledGate {
        cell_count: layout.len(),
        footprint_um2: fp.area_um2,
        input_names: pins.iter().map(|p| p.name.clone()).collect(),
        output_name: OUTPUT_NAME.to_string(),
        pins,
        min_cycles: 3 + 3 * rows + 2 * cols,
        source: grid.clone(),
        layout,
    })
}

fn to_i32(v: usize) -> Result<i32, CompileError> {
    i32::try_from(v).map_err(|_| CompileError::TooLarge(v))
}

/// Reference cell counts and areas for the metrics report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceMetrics {
    pub cells: usize,
    pub area_um2: f64,
}

pub const NAND_REFERENCE: ReferenceMetrics = ReferenceMetrics {
    cells: 147,
    area_um2: 0.31,
};
pub const NOR_REFERENCE: ReferenceMetrics = ReferenceMetrics {
    cells: 147,
    area_um2: 0.34,
};
pub const FLIPFLOP_REFERENCE: ReferenceMetrics = ReferenceMetrics {
    cells: 30,
    area_um2: 0.04,
};

#[derive(Debug, Clone, PartialEq)]
pub struct GateMetrics {
    pub gate: String,
    pub footprint: Footprint,
    pub reference: Option<ReferenceMetrics>,
}

/// `gate,cells,width_nm,height_nm,area_um2,ref_cells,ref_area_um2`;
/// reference columns are empty when unknown.
pub fn metrics_csv(rows: &[GateMetrics]) -> String {
    let mut out = String::from("gate,cells,width_nm,height_nm,area_um2,ref_cells,ref_area_um2\n");
    for m in rows {
        let f = &m.footprint;
        let _ = write!(
            out,
            "{},{},{},{},{:.6}",
            m.gate, f.cell_count, f.width_nm, f.height_nm, f.area_um2
        );
        match m.reference {
            Some(r) => {
                let _ = writeln!(out, ",{},{}", r.cells, r.area_um2);
            }
            None => out.push_str(",,\n"),
        }
    }
    out
}

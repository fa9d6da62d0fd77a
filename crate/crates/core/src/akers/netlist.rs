// SPDX-License-Identifier: Apache-2.0

//! Line-oriented Akers netlist:
//!
//! ```text
//! akers <rows> <cols> <invert:0|1>
//! cell <row> <col> const <0|1>
//! cell <row> <col> var <name>
//! cell <row> <col> nvar <name>
//! cell <row> <col> stored <index>
//! ```
//!
//! `#` starts a comment. Cells are written in row-major order.

use std::fmt::Write as _;

use super::{AkersGrid, Bit, ZSource};
use crate::text::{content_lines, parse_field, ParseError};

pub fn write_netlist(grid: &AkersGrid) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "akers {} {} {}",
        grid.rows(),
        grid.cols(),
        u8::from(grid.invert_output())
    );
    for r in 0..grid.rows() {
        for c in 0..grid.cols() {
            let _ = match grid.z(r, c) {
                ZSource::Const(b) => writeln!(out, "cell {r} {c} const {b}"),
                ZSource::Var(name) => writeln!(out, "cell {r} {c} var {name}"),
                ZSource::NotVar(name) => writeln!(out, "cell {r} {c} nvar {name}"),
                ZSource::Stored(i) => writeln!(out, "cell {r} {c} stored {i}"),
            };
        }
    }
    out
}

pub fn parse_netlist(text: &str) -> Result<AkersGrid, ParseError> {
    let mut lines = content_lines(text);
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "empty netlist"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "akers" {
        return Err(ParseError::new(
            header_no,
            "expected `akers <rows> <cols> <invert:0|1>`",
        ));
    }
    let rows: usize = parse_field(header_no, fields[1], "rows")?;
    let cols: usize = parse_field(header_no, fields[2], "cols")?;
    let invert = match fields[3] {
        "0" => false,
        "1" => true,
        other => {
            return Err(ParseError::new(
                header_no,
                format!("bad invert flag `{other}`"),
            ))
        }
    };
    if rows == 0 || cols == 0 {
        return Err(ParseError::new(
            header_no,
            "grid dimensions must be positive",
        ));
    }
    let total = rows
        .checked_mul(cols)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| ParseError::new(header_no, "grid too large"))?;

    let mut z: Vec<Option<ZSource>> = vec![None; total];
    for (no, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 5 || f[0] != "cell" {
            return Err(ParseError::new(
                no,
                "expected `cell <row> <col> <kind> <value>`",
            ));
        }
        let r: usize = parse_field(no, f[1], "row")?;
        let c: usize = parse_field(no, f[2], "col")?;
        if r >= rows || c >= cols {
            return Err(ParseError::new(
                no,
                format!("cell ({r}, {c}) outside {rows}x{cols}"),
            ));
        }
        let source = match f[3] {
            "const" => ZSource::Const(
                f[4].chars()
                    .next()
                    .filter(|_| f[4].len() == 1)
                    .and_then(Bit::from_char)
                    .ok_or_else(|| ParseError::new(no, format!("bad constant `{}`", f[4])))?,
            ),
            "var" => ZSource::Var(f[4].to_string()),
            "nvar" => ZSource::NotVar(f[4].to_string()),
            "stored" => ZSource::Stored(parse_field(no, f[4], "stored index")?),
            other => return Err(ParseError::new(no, format!("unknown cell kind `{other}`"))),
        };
        let slot = &mut z[r * cols + c];
        if slot.is_some() {
            return Err(ParseError::new(no, format!("cell ({r}, {c}) given twice")));
        }
        *slot = Some(source);
    }
    let z = z
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or_else(|| {
                ParseError::new(0, format!("cell ({}, {}) missing", i / cols, i % cols))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    AkersGrid::new(rows, cols, z, invert).map_err(|e| ParseError::new(0, e.to_string()))
}

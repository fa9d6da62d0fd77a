// SPDX-License-Identifier: Apache-2.0

//! Line-oriented layout format:
//!
//! ```text
//! qca <cell_size_nm> <dot_spacing_nm> <pitch_nm>
//! params <radius_nm> <tolerance> <max_iterations> <temperature_k>
//! cell <id> <x> <y> <zone> normal [rot45]
//! cell <id> <x> <y> <zone> fixed <+1|-1> [rot45]
//! cell <id> <x> <y> <zone> in <name> [rot45]
//! cell <id> <x> <y> <zone> out <name> [rot45]
//! ```
//!
//! The `params` line is optional, must directly follow the header and is
//! only written when the parameters differ from the defaults.

use std::fmt::Write as _;

use super::geometry::Geometry;
use super::layout::{CellKind, Polarization, QcaCell, QcaLayout, Rotation, SimParams};
use crate::text::{content_lines, parse_field, ParseError};

pub fn write_layout(layout: &QcaLayout) -> String {
    let g = &layout.geometry;
    let p = &layout.params;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "qca {} {} {}",
        g.cell_size_nm, g.dot_spacing_nm, g.pitch_nm
    );
    if *p != SimParams::default() {
        let _ = writeln!(
            out,
            "params {} {} {} {}",
            p.radius_of_effect_nm,
            p.convergence_tolerance,
            p.max_iterations_per_step,
            p.temperature_k
        );
    }
    for c in layout.cells() {
        let _ = write!(out, "cell {} {} {} {} ", c.id, c.x, c.y, c.zone);
        let _ = match &c.kind {
            CellKind::Normal => write!(out, "normal"),
            CellKind::FixedInput(p) if p.value() > 0.0 => write!(out, "fixed +1"),
            CellKind::FixedInput(_) => write!(out, "fixed -1"),
            CellKind::NamedInput(n) => write!(out, "in {n}"),
            CellKind::NamedOutput(n) => write!(out, "out {n}"),
        };
        if c.rotation == Rotation::Rotated45 {
            out.push_str(" rot45");
        }
        out.push('\n');
    }
    out
}

pub fn parse_layout(text: &str) -> Result<QcaLayout, ParseError> {
    let mut lines = content_lines(text).peekable();
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "empty layout"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "qca" {
        return Err(ParseError::new(
            header_no,
            "expected `qca <cell_size_nm> <dot_spacing_nm> <pitch_nm>`",
        ));
    }
    let geometry = Geometry {
        cell_size_nm: parse_field(header_no, fields[1], "cell size")?,
        dot_spacing_nm: parse_field(header_no, fields[2], "dot spacing")?,
        pitch_nm: parse_field(header_no, fields[3], "pitch")?,
    };
    geometry
        .validate()
        .map_err(|e| ParseError::new(header_no, e.to_string()))?;

    let mut params = SimParams::default();
    if let Some(&(no, line)) = lines.peek() {
        if line.starts_with("params") {
            lines.next();
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 5 || f[0] != "params" {
                return Err(ParseError::new(
                    no,
                    "expected `params <radius_nm> <tolerance> <max_iterations> <temperature_k>`",
                ));
            }
            params = SimParams {
                radius_of_effect_nm: parse_field(no, f[1], "radius")?,
                convergence_tolerance: parse_field(no, f[2], "tolerance")?,
                max_iterations_per_step: parse_field(no, f[3], "iteration limit")?,
                temperature_k: parse_field(no, f[4], "temperature")?,
            };
            params
                .validate(&geometry)
                .map_err(|e| ParseError::new(no, e.to_string()))?;
        }
    }

    let mut layout = QcaLayout::new(geometry, params);
    for (no, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.first() != Some(&"cell") || f.len() < 6 {
            return Err(ParseError::new(
                no,
                "expected `cell <id> <x> <y> <zone> <kind> ...`",
            ));
        }
        let x: i32 = parse_field(no, f[2], "x")?;
        let y: i32 = parse_field(no, f[3], "y")?;
        let zone: u8 = parse_field(no, f[4], "zone")?;
        let (kind, rest) = match f[5] {
            "normal" => (CellKind::Normal, &f[6..]),
            "fixed" | "in" | "out" => {
                let arg = *f
                    .get(6)
                    .ok_or_else(|| ParseError::new(no, format!("`{}` needs an argument", f[5])))?;
                let kind = match f[5] {
                    "fixed" => match arg {
                        "+1" | "1" => CellKind::FixedInput(Polarization::ONE),
                        "-1" => CellKind::FixedInput(Polarization::MINUS_ONE),
                        other => {
                            return Err(ParseError::new(
                                no,
                                format!("bad fixed polarization `{other}`"),
                            ))
                        }
                    },
                    "in" => CellKind::NamedInput(arg.to_string()),
                    _ => CellKind::NamedOutput(arg.to_string()),
                };
                (kind, &f[7..])
            }
            other => return Err(ParseError::new(no, format!("unknown cell kind `{other}`"))),
        };
        let rotation = match rest {
            [] => Rotation::Standard,
            ["rot45"] => Rotation::Rotated45,
            _ => {
                return Err(ParseError::new(
                    no,
                    format!("unexpected trailing `{}`", rest.join(" ")),
                ))
            }
        };
        let mut cell = QcaCell::new(f[1], x, y, zone, kind);
        cell.rotation = rotation;
        layout
            .add(cell)
            .map_err(|e| ParseError::new(no, e.to_string()))?;
    }
    Ok(layout)
}

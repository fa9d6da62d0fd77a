// SPDX-License-Identifier: Apache-2.0

//! Hand-placed reference layouts and a compact text builder for them.

use super::layout::{CellKind, Polarization, QcaCell, QcaLayout, Rotation};
use super::QcaError;

/// Builds a layout from a token map. Each non-blank line is one row (y grows
/// downwards) and each whitespace-separated token one column:
///
/// * `.` leaves the slot empty;
/// * `n<z>` is a normal cell in zone `z`, `r<z>` a rotated one;
/// * `+<z>` / `-<z>` are fixed cells at +1 / -1;
/// * `<L><z>` for a letter listed in `pins` becomes that port.
///
/// Cell ids are `c<x>_<y>`.
pub fn from_ascii(art: &str, pins: &[(char, CellKind)]) -> Result<QcaLayout, QcaError> {
    let mut layout = QcaLayout::default();
    for (y, line) in art.lines().filter(|l| !l.trim().is_empty()).enumerate() {
        for (x, token) in line.split_whitespace().enumerate() {
            if token == "." {
                continue;
            }
            let mut chars = token.chars();
            let (Some(tag), Some(zone), None) = (chars.next(), chars.next(), chars.next()) else {
                return Err(QcaError::InvalidId(token.to_string()));
            };
            let zone = zone
                .to_digit(10)
                .and_then(|z| u8::try_from(z).ok())
                .ok_or_else(|| QcaError::InvalidId(token.to_string()))?;
            let (kind, rotation) = match tag {
                'n' => (CellKind::Normal, Rotation::Standard),
                'r' => (CellKind::Normal, Rotation::Rotated45),
                '+' => (CellKind::FixedInput(Polarization::ONE), Rotation::Standard),
                '-' => (
                    CellKind::FixedInput(Polarization::MINUS_ONE),
                    Rotation::Standard,
                ),
                c => {
                    let kind = pins
                        .iter()
                        .find(|(p, _)| *p == c)
                        .map(|(_, k)| k.clone())
                        .ok_or_else(|| QcaError::InvalidId(token.to_string()))?;
                    (kind, Rotation::Standard)
                }
            };
            let (x, y) = (coord(x)?, coord(y)?);
            let mut cell = QcaCell::new(format!("c{x}_{y}"), x, y, zone, kind);
            cell.rotation = rotation;
            layout.add(cell)?;
        }
    }
    Ok(layout)
}

fn coord(v: usize) -> Result<i32, QcaError> {
    i32::try_from(v).map_err(|_| QcaError::InvalidGeometry("layout too large".into()))
}

fn input(name: &str) -> CellKind {
    CellKind::NamedInput(name.to_string())
}

fn output(name: &str) -> CellKind {
    CellKind::NamedOutput(name.to_string())
}

/// A straight wire: input `A` followed by `length` cells, the last one
/// being output `Y`. Every four cells move to the next clock zone.
pub fn wire_layout(length: usize) -> Result<QcaLayout, QcaError> {
    if length < 2 {
        return Err(QcaError::InvalidParams("wire length must be >= 2".into()));
    }
    let mut layout = QcaLayout::default();
    layout.add(QcaCell::new("in", 0, 0, 0, input("A")))?;
    for i in 1..=length {
        let zone = u8::try_from(((i - 1) / 4) % 4).expect("zone < 4");
        let kind = if i == length {
            output("Y")
        } else {
            CellKind::Normal
        };
        layout.add(QcaCell::new(format!("w{i}"), coord(i)?, 0, zone, kind))?;
    }
    Ok(layout)
}

/// `Y = NOT A` through a forked diagonal step.
pub fn inverter_layout() -> Result<QcaLayout, QcaError> {
    from_ascii(
        "
        .  n0 n0 .
        A0 n0 .  Y1
        .  n0 n0 .
        ",
        &[('A', input("A")), ('Y', output("Y"))],
    )
}

/// `Y = MAJ(A, B, C)`.
pub fn majority_layout() -> Result<QcaLayout, QcaError> {
    from_ascii(
        "
        .  A0 .  .
        B0 n0 n1 Y1
        .  C0 .  .
        ",
        &[
            ('A', input("A")),
            ('B', input("B")),
            ('C', input("C")),
            ('Y', output("Y")),
        ],
    )
}

/// Input names of [`flipflop_layout`].
pub const FLIPFLOP_DATA: &str = "D";
pub const FLIPFLOP_ENABLE: &str = "EN";
pub const FLIPFLOP_OUTPUT: &str = "Q";

/// A 30-cell level-sensitive latch: `Q' = MAJ(Q, D·EN, D + !EN)`.
///
/// The two input gates sit in zone 2, their outputs reach the storage
/// majority in zone 3, and the stored bit circulates through a ring
/// covering zones 0 to 3. `!EN` comes from one diagonal step off the `EN`
/// pin. With `EN` low the gate inputs cancel and the ring alone decides.
pub fn flipflop_layout() -> Result<QcaLayout, QcaError> {
    from_ascii(
        "
        .  .  .  n0 n1 .  .
        .  .  E0 .  n1 .  .
        .  -0 n2 D0 n2 +0 .
        .  .  n3 .  n3 .  .
        .  .  n3 .  n3 .  .
        .  .  n3 n3 n0 n1 n1
        .  .  .  .  n3 .  n1
        .  .  .  .  n3 n2 n2
        .  .  .  .  .  n2 .
        .  .  .  .  .  n2 .
        .  .  .  .  .  n2 .
        .  .  .  .  .  n2 .
        .  .  .  .  .  n2 .
        .  .  .  .  .  n2 .
        .  .  .  .  .  Q2 .
        ",
        &[
            ('D', input(FLIPFLOP_DATA)),
            ('E', input(FLIPFLOP_ENABLE)),
            ('Q', output(FLIPFLOP_OUTPUT)),
        ],
    )
}

// SPDX-License-Identifier: Apache-2.0

//! Electrostatics of the four-dot cell.
//!
//! A cell carries two mobile electrons on one of its diagonals over a
//! neutralising background of `+e/2` per dot, so each dot holds a net charge
//! of `∓e/2` depending on whether the polarization occupies it. The energy
//! of a cell pair is bilinear in their polarizations, `E = P_a·P_b·W`, and
//! the kink energy is the cost of opposite alignment, `E(-1,+1) - E(+1,+1)`.

use super::layout::{QcaCell, Rotation};
use super::QcaError;

/// `e²/(4πε₀)` in meV·nm.
pub const COULOMB_MEV_NM: f64 = 1_439.964_547;
/// Relative permittivity of GaAs/AlGaAs.
pub const RELATIVE_PERMITTIVITY: f64 = 12.9;

/// Physical dimensions shared by every cell of a layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub cell_size_nm: f64,
    /// Offset of each dot from the cell centre along both axes.
    pub dot_spacing_nm: f64,
    /// Centre-to-centre distance of neighbouring grid positions.
    pub pitch_nm: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            cell_size_nm: 18.0,
            dot_spacing_nm: 5.0,
            pitch_nm: 20.0,
        }
    }
}

impl Geometry {
    pub fn validate(&self) -> Result<(), QcaError> {
        let ok = self.cell_size_nm > 0.0
            && self.dot_spacing_nm > 0.0
            && self.pitch_nm > 0.0
            && 2.0 * self.dot_spacing_nm < self.cell_size_nm
            && self.cell_size_nm <= self.pitch_nm;
        if ok {
            Ok(())
        } else {
            Err(QcaError::InvalidGeometry(format!("{self:?}")))
        }
    }

    /// Dot positions (nm) and their diagonal sign. Dots with sign `+1` are
    /// the ones the electrons occupy at polarization `+1`; with `y` growing
    /// downwards these are top-right and bottom-left.
    pub(crate) fn dots(&self, x: i32, y: i32, rotation: Rotation) -> [(f64, f64, f64); 4] {
        let cx = f64::from(x) * self.pitch_nm;
        let cy = f64::from(y) * self.pitch_nm;
        let d = self.dot_spacing_nm;
        match rotation {
            Rotation::Standard => [
                (cx + d, cy - d, 1.0),
                (cx - d, cy + d, 1.0),
                (cx - d, cy - d, -1.0),
                (cx + d, cy + d, -1.0),
            ],
            Rotation::Rotated45 => {
                let r = d * std::f64::consts::SQRT_2;
                [
                    (cx, cy - r, 1.0),
                    (cx, cy + r, 1.0),
                    (cx - r, cy, -1.0),
                    (cx + r, cy, -1.0),
                ]
            }
        }
    }

    /// Centre distance in nm between two grid positions.
    pub fn distance_nm(&self, a: (i32, i32), b: (i32, i32)) -> f64 {
        let dx = f64::from(a.0 - b.0);
        let dy = f64::from(a.1 - b.1);
        dx.hypot(dy) * self.pitch_nm
    }

    /// Kink energy between two standard cells one pitch apart.
    pub fn adjacent_kink_energy(&self) -> f64 {
        pair_kink(self, (0, 0, Rotation::Standard), (1, 0, Rotation::Standard))
    }
}

fn pair_kink(geometry: &Geometry, a: (i32, i32, Rotation), b: (i32, i32, Rotation)) -> f64 {
    let scale = COULOMB_MEV_NM / RELATIVE_PERMITTIVITY / 4.0;
    let da = geometry.dots(a.0, a.1, a.2);
    let db = geometry.dots(b.0, b.1, b.2);
    let mut overlap = 0.0;
    for &(x1, y1, s1) in &da {
        for &(x2, y2, s2) in &db {
            overlap += s1 * s2 / (x1 - x2).hypot(y1 - y2);
        }
    }
    // E(Pa, Pb) = Pa·Pb·scale·overlap
    -2.0 * scale * overlap
}

/// Kink energy (meV) of two cells. Positive values favour equal
/// polarizations.
pub fn kink_energy(
    a: &QcaCell,
    b: &QcaCell,
    geometry: &Geometry,
    radius_of_effect_nm: f64,
) -> Result<f64, QcaError> {
    if (a.x, a.y) == (b.x, b.y) {
        return Err(QcaError::Overlap(a.x, a.y));
    }
    let distance = geometry.distance_nm((a.x, a.y), (b.x, b.y));
    if distance > radius_of_effect_nm {
        return Err(QcaError::OutOfRange {
            distance_nm: distance,
            radius_nm: radius_of_effect_nm,
        });
    }
    // a fixed argument order makes the result exactly symmetric
    let (a, b) = if (a.x, a.y) < (b.x, b.y) {
        (a, b)
    } else {
        (b, a)
    };
    Ok(pair_kink(
        geometry,
        (a.x, a.y, a.rotation),
        (b.x, b.y, b.rotation),
    ))
}

// SPDX-License-Identifier: Apache-2.0

//! Constructions of common gates as Akers arrays.

use super::{AkersError, AkersGrid, Bit, ZSource};

/// Largest parity arity `build_xor` accepts.
pub const MAX_XOR_ARITY: usize = 8;

/// Canonical input name for position `i`: `A`, `B`, ... then `x26`, `x27`, ...
pub fn input_name(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("x{i}")
    }
}

/// `n` cells in a row with `Z = x_i`. Cell `j` sees the product of the
/// previous inputs on its left and `0` from above, so the row computes
/// the conjunction of all inputs. The cell count grows by one per input.
pub fn build_and_chain(n: usize, invert_output: bool) -> Result<AkersGrid, AkersError> {
    if n == 0 {
        return Err(AkersError::InvalidGrid("empty chain".into()));
    }
    let z = (0..n).map(|i| ZSource::Var(input_name(i))).collect();
    AkersGrid::new(1, n, z, invert_output)
}

/// `n` cells in a column with `Z = x_i`: cell `i` passes the disjunction
/// of the inputs above it, since `Y = 1` on the left column.
pub fn build_or_column(n: usize, invert_output: bool) -> Result<AkersGrid, AkersError> {
    if n == 0 {
        return Err(AkersError::InvalidGrid("empty column".into()));
    }
    let z = (0..n).map(|i| ZSource::Var(input_name(i))).collect();
    AkersGrid::new(n, 1, z, invert_output)
}

/// Two cells side by side followed by an inverter.
pub fn build_nand() -> AkersGrid {
    build_and_chain(2, true).expect("fixed shape")
}

/// Two cells stacked vertically followed by an inverter.
pub fn build_nor() -> AkersGrid {
    build_or_column(2, true).expect("fixed shape")
}

/// An `n`-input parity array of side `2^(n-1)`.
///
/// The grid is split into quadrants around the first input `a`. The upper
/// left quadrant is flooded with `a`. Because the upper-right quadrant sees
/// `a` on its left edge it behaves like a standalone array whenever `a = 1`,
/// and the lower-left quadrant sees `a` on its top edge so it is exact
/// whenever `a = 0`. They hold the odd and even parity of the remaining
/// inputs; the corner cell selects between them with `Z = ā`.
///
/// Positive literals alone cannot express parity (every such array is
/// monotone), so the corner uses the complemented side of the primitive.
pub fn build_xor(n: usize) -> Result<AkersGrid, AkersError> {
    if !(2..=MAX_XOR_ARITY).contains(&n) {
        return Err(AkersError::ArityOutOfRange(n));
    }
    let names: Vec<String> = (0..n).map(input_name).collect();
    let block = parity_block(&names, false);
    AkersGrid::from_rows(block, false)
}

fn parity_block(names: &[String], invert: bool) -> Vec<Vec<ZSource>> {
    let (first, rest) = names.split_first().expect("non-empty");
    if rest.is_empty() {
        let lit = if invert {
            ZSource::NotVar(first.clone())
        } else {
            ZSource::Var(first.clone())
        };
        return vec![vec![lit]];
    }
    let odd = parity_block(rest, !invert);
    let even = parity_block(rest, invert);
    let half = odd.len();
    let side = 2 * half;
    let copy_down = ZSource::Const(Bit::ZERO);
    let copy_right = ZSource::Const(Bit::ONE);
    let mut out = vec![vec![copy_down.clone(); side]; side];
    for r in 0..half {
        for c in 0..half {
            out[r][c] = match (r, c) {
                (0, 0) => ZSource::Var(first.clone()),
                (0, _) => copy_right.clone(),
                _ => copy_down.clone(),
            };
            out[r][half + c] = odd[r][c].clone();
            out[half + r][c] = even[r][c].clone();
        }
    }
    for z in &mut out[side - 1][half..side - 1] {
        *z = copy_right.clone();
    }
    // column side-1 below the odd block already copies downward
    out[side - 1][side - 1] = ZSource::NotVar(first.clone());
    out
}

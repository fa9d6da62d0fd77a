// SPDX-License-Identifier: Apache-2.0

//! The in-memory primitive cell: two complementary clocked flip-flops that
//! act as switches. The `Qz` flip-flop gates the `Y` input and the `Q̄z`
//! flip-flop gates the `X` input; exactly one of them conducts.

use super::{AkersError, Bit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimitiveCellState {
    pub qz: Bit,
    pub qz_bar: Bit,
    pub clock_qz_active: bool,
    pub clock_qzbar_active: bool,
}

/// Write stage: the flip-flop whose clock is active captures the bit, so
/// writing 1 activates the `Qz` clock and writing 0 the `Q̄z` clock.
pub fn write_primitive(bit: Bit) -> PrimitiveCellState {
    PrimitiveCellState {
        qz: bit,
        qz_bar: !bit,
        clock_qz_active: bit.is_set(),
        clock_qzbar_active: !bit.is_set(),
    }
}

pub fn validate_primitive(state: &PrimitiveCellState) -> Result<(), AkersError> {
    if state.clock_qz_active && state.clock_qzbar_active {
        return Err(AkersError::BothClocksActive);
    }
    if state.qz == state.qz_bar {
        return Err(AkersError::NonComplementaryState);
    }
    Ok(())
}

/// Execute stage of one cell through the switch model.
pub fn switch_eval(x: Bit, y: Bit, state: &PrimitiveCellState) -> Result<Bit, AkersError> {
    validate_primitive(state)?;
    let y_switch_closed = state.qz.is_set();
    let x_switch_closed = state.qz_bar.is_set();
    // exactly one switch conducts once validated
    Ok(match (x_switch_closed, y_switch_closed) {
        (true, false) => x,
        (false, true) => y,
        _ => unreachable!("complementary state"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::akers::akers_eval;

    const BITS: [Bit; 2] = [Bit::ZERO, Bit::ONE];

    #[test]
    fn write_one_activates_qz_clock() {
        assert_eq!(
            write_primitive(Bit::ONE),
            PrimitiveCellState {
                qz: Bit::ONE,
                qz_bar: Bit::ZERO,
                clock_qz_active: true,
                clock_qzbar_active: false,
            }
        );
    }

    #[test]
    fn write_zero_activates_qzbar_clock() {
        assert_eq!(
            write_primitive(Bit::ZERO),
            PrimitiveCellState {
                qz: Bit::ZERO,
                qz_bar: Bit::ONE,
                clock_qz_active: false,
                clock_qzbar_active: true,
            }
        );
    }

    #[test]
    fn written_states_are_complementary_and_valid() {
        for b in BITS {
            let s = write_primitive(b);
            assert_ne!(s.qz, s.qz_bar);
            assert!(validate_primitive(&s).is_ok());
        }
    }

    #[test]
    fn validation_examples() {
        let mut s = PrimitiveCellState {
            qz: Bit::ONE,
            qz_bar: Bit::ZERO,
            clock_qz_active: true,
            clock_qzbar_active: false,
        };
        assert_eq!(validate_primitive(&s), Ok(()));
        s.clock_qzbar_active = true;
        assert_eq!(validate_primitive(&s), Err(AkersError::BothClocksActive));
        s.clock_qzbar_active = false;
        s.qz_bar = Bit::ONE;
        assert_eq!(
            validate_primitive(&s),
            Err(AkersError::NonComplementaryState)
        );
    }

    #[test]
    fn switch_examples() {
        assert_eq!(
            switch_eval(Bit::ZERO, Bit::ONE, &write_primitive(Bit::ONE)),
            Ok(Bit::ONE)
        );
        assert_eq!(
            switch_eval(Bit::ONE, Bit::ZERO, &write_primitive(Bit::ZERO)),
            Ok(Bit::ONE)
        );
    }

    #[test]
    fn switch_model_matches_cell_equation_exhaustively() {
        for x in BITS {
            for y in BITS {
                for b in BITS {
                    let state = write_primitive(b);
                    assert_eq!(switch_eval(x, y, &state).unwrap(), akers_eval(x, y, b));
                }
            }
        }
    }

    #[test]
    fn switch_rejects_both_clocks() {
        let mut s = write_primitive(Bit::ONE);
        s.clock_qzbar_active = true;
        assert_eq!(
            switch_eval(Bit::ZERO, Bit::ONE, &s),
            Err(AkersError::BothClocksActive)
        );
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Processing-in-memory logic built from Akers arrays on quantum-dot
//! cellular automata.
//!
//! The crate has two layers. [`akers`] evaluates Akers arrays at the bit
//! level, including the complementary flip-flop switch model of each
//! primitive cell. [`qca`] relaxes physical QCA cell layouts under a
//! four-phase clock with the bistable approximation. [`compiler`] lowers
//! arrays to layouts and [`power`] estimates their energy dissipation.

pub mod akers;
pub mod compiler;
pub mod power;
pub mod qca;
pub mod text;

pub use akers::{akers_eval, AkersError, AkersGrid, Assignment, Bit, TruthTable, ZSource};
pub use text::ParseError;

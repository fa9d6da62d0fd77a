// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by the benchmarks.

use akers_qca::qca::{InputVector, QcaLayout};
use akers_qca::Bit;

/// Every assignment of the layout's named inputs, counting up from all zeros.
pub fn exhaustive_vectors(layout: &QcaLayout) -> Vec<InputVector> {
    let names = layout.input_names();
    let n = names.len();
    (0..1usize << n)
        .map(|i| {
            names
                .iter()
                .enumerate()
                .map(|(k, name)| (name.clone(), Bit::new(i >> (n - 1 - k) & 1 == 1)))
                .collect()
        })
        .collect()
}

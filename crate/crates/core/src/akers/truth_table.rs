// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use super::{grid_eval, AkersError, AkersGrid, Assignment, Bit};

/// Upper bound on enumerated variables.
pub const MAX_TABLE_VARS: usize = 20;

/// Outputs for every input vector in binary counting order, first variable
/// most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub num_vars: usize,
    pub variables: Vec<String>,
    pub outputs: Vec<Bit>,
}

impl TruthTable {
    /// Assignment for row `index`.
    pub fn assignment(&self, index: usize) -> Assignment {
        assignment_for(&self.variables, index)
    }

    /// Bit-string label of row `index`, e.g. `01`.
    pub fn label(&self, index: usize) -> String {
        vector_label(self.num_vars, index)
    }

    /// CSV with header `inputs,output`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("inputs,output\n");
        for (i, bit) in self.outputs.iter().enumerate() {
            let _ = writeln!(out, "{},{}", self.label(i), bit);
        }
        out
    }
}

pub(crate) fn vector_label(num_vars: usize, index: usize) -> String {
    (0..num_vars)
        .map(|k| {
            if (index >> (num_vars - 1 - k)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

pub(crate) fn assignment_for(variables: &[String], index: usize) -> Assignment {
    let n = variables.len();
    variables
        .iter()
        .enumerate()
        .map(|(k, name)| (name.clone(), Bit::new((index >> (n - 1 - k)) & 1 == 1)))
        .collect()
}

/// Truth table of a grid without stored bits.
pub fn truth_table(grid: &AkersGrid) -> Result<TruthTable, AkersError> {
    truth_table_with(grid, &[])
}

/// Truth table over the grid's variables with the stored bits held fixed.
pub fn truth_table_with(grid: &AkersGrid, stored: &[Bit]) -> Result<TruthTable, AkersError> {
    let variables = grid.variables();
    let n = variables.len();
    if n > MAX_TABLE_VARS {
        return Err(AkersError::TooManyVariables(n));
    }
    let outputs = (0..1usize << n)
        .map(|i| grid_eval(grid, &assignment_for(&variables, i), stored).map(|e| e.output))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TruthTable {
        num_vars: n,
        variables,
        outputs,
    })
}

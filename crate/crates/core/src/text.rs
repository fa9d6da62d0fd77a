// SPDX-License-Identifier: Apache-2.0

//! Shared helpers for the line-oriented text formats.

use std::str::FromStr;

use thiserror::Error;

/// A format error; `line` is 1-based, 0 when not tied to a line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Non-empty lines with `#` comments stripped, paired with 1-based numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub(crate) fn parse_field<T: FromStr>(
    line: usize,
    field: &str,
    what: &str,
) -> Result<T, ParseError> {
    field
        .parse()
        .map_err(|_| ParseError::new(line, format!("bad {what} `{field}`")))
}

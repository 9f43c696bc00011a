//! Text forms of a square: a JSON cell list, a CSV grid and an ASCII grid.
//!
//! Empty cells are structural, so JSON lists only filled cells and CSV leaves
//! the field empty. A `0` is always a filled cell.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::square::{Cell, SparseSquare, SquareError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub row: usize,
    pub col: usize,
    pub value: i64,
}

/// JSON schema: `{"n": .., "k": .., "cells": [{"row", "col", "value"}, ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareDocument {
    pub n: usize,
    pub k: usize,
    pub cells: Vec<CellRecord>,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Square(#[from] SquareError),
}

impl From<&SparseSquare> for SquareDocument {
    fn from(s: &SparseSquare) -> Self {
        Self {
            n: s.order(),
            k: s.fill(),
            cells: s
                .entries()
                .map(|(c, value)| CellRecord {
                    row: c.row,
                    col: c.col,
                    value,
                })
                .collect(),
        }
    }
}

impl SquareDocument {
    /// Converts to a square, rejecting repeated or out-of-range cells. The
    /// fill count is taken as given; [`crate::verify`] judges it.
    pub fn into_square(self) -> Result<SparseSquare, SquareError> {
        SparseSquare::from_entries_unchecked_fill(
            self.n,
            self.k,
            self.cells
                .into_iter()
                .map(|r| (Cell::new(r.row, r.col), r.value)),
        )
    }
}

/// Single-line JSON followed by a newline.
pub fn to_json(s: &SparseSquare) -> String {
    let mut out = serde_json::to_string(&SquareDocument::from(s)).expect("plain data serializes");
    out.push('\n');
    out
}

pub fn from_json(text: &str) -> Result<SparseSquare, DocumentError> {
    let doc: SquareDocument = serde_json::from_str(text)?;
    Ok(doc.into_square()?)
}

/// Header `n=<n>,k=<k>`, then `n` lines of `n` comma-separated fields.
pub fn to_csv(s: &SparseSquare) -> String {
    let n = s.order();
    let mut out = format!("n={},k={}\n", n, s.fill());
    for r in 0..n {
        let fields: Vec<String> = s
            .row(r)
            .into_iter()
            .map(|v| v.map(|v| v.to_string()).unwrap_or_default())
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn from_csv(text: &str) -> Result<SparseSquare, DocumentError> {
    let err = |line: usize, message: String| DocumentError::Csv { line, message };
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r')).enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing header".into()))?;
    let (n, k) = parse_header(header).ok_or_else(|| err(1, format!("bad header {header:?}")))?;
    if n == 0 {
        return Err(err(1, "order must be at least 1".into()));
    }
    let mut entries = Vec::new();
    let mut rows = 0;
    for (idx, line) in lines {
        if rows == n {
            if line.trim().is_empty() {
                continue;
            }
            return Err(err(idx + 1, format!("more than {n} rows")));
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != n {
            return Err(err(
                idx + 1,
                format!("expected {n} fields, found {}", fields.len()),
            ));
        }
        for (col, field) in fields.into_iter().enumerate() {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let value = field
                .parse::<i64>()
                .map_err(|e| err(idx + 1, format!("field {}: {e}", col + 1)))?;
            entries.push((Cell::new(rows, col), value));
        }
        rows += 1;
    }
    if rows != n {
        return Err(err(rows + 2, format!("expected {n} rows, found {rows}")));
    }
    Ok(SparseSquare::from_entries_unchecked_fill(n, k, entries)?)
}

fn parse_header(header: &str) -> Option<(usize, usize)> {
    let (n, k) = header.trim().split_once(',')?;
    let n = n.trim().strip_prefix("n=")?.trim().parse().ok()?;
    let k = k.trim().strip_prefix("k=")?.trim().parse().ok()?;
    Some((n, k))
}

/// Picks JSON when the first non-blank character is `{`, CSV otherwise.
pub fn decode_auto(text: &str) -> Result<SparseSquare, DocumentError> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_csv(text)
    }
}

/// Grid with `|` separators; every cell is padded to the width of `kn - 1`
/// and empty cells are blank.
pub fn to_ascii(s: &SparseSquare) -> String {
    let largest = (s.order() * s.fill()).saturating_sub(1) as i64;
    let widest = s
        .entries()
        .map(|(_, v)| v.to_string().len())
        .max()
        .unwrap_or(1);
    let width = largest.to_string().len().max(widest);
    let mut out = String::new();
    for r in 0..s.order() {
        out.push('|');
        for v in s.row(r) {
            match v {
                Some(v) => write!(out, "{v:>width$}|").unwrap(),
                None => write!(out, "{:width$}|", "").unwrap(),
            }
        }
        out.push('\n');
    }
    out
}

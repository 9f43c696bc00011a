//! Composition of k-diagonal magic squares: cyclic shifts, value offsets,
//! superimposition of band-adjacent squares, and the top-level generator.

use std::fmt;

use thiserror::Error;

use crate::construct::{construct, construct_trivial, ConstructionError};
use crate::square::{occupied_band, verify, Cell, NotABand, SparseSquare, VerificationReport};

/// Why no k-diagonal magic square of order `n` exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Nonexistence {
    #[error("k = {k} exceeds n = {n}: a line cannot hold more than n cells")]
    WidthExceedsOrder { n: usize, k: usize },
    #[error("k = {k} < 3 with n = {n}: only n = k = 1 or 3 <= k <= n admit a square")]
    TooFewDiagonals { n: usize, k: usize },
    #[error(
        "parity: n = {n} is even and k = {k} is odd, so the magic sum k(kn-1)/2 is not an integer"
    )]
    Parity { n: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("n and k must be positive (got n = {n}, k = {k})")]
    InvalidParameters { n: usize, k: usize },
    #[error(transparent)]
    Nonexistent(#[from] Nonexistence),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("combined width {width} exceeds order {n}")]
    WidthExceedsOrder { width: usize, n: usize },
    #[error("{which} operand is not a k-diagonal magic square")]
    NotMagic { which: &'static str },
    #[error("both operands fill cell {0}")]
    OverlappingCell(Cell),
    #[error("combined diagonals {occupied:?} do not form a single band")]
    NonConsecutiveBand { occupied: Vec<usize> },
}

/// Reasons the closed-form existence test fails, or `Ok` if a square exists.
pub fn existence(n: usize, k: usize) -> Result<(), GenerateError> {
    if n == 0 || k == 0 {
        return Err(GenerateError::InvalidParameters { n, k });
    }
    if n == 1 && k == 1 {
        return Ok(());
    }
    if k > n {
        return Err(Nonexistence::WidthExceedsOrder { n, k }.into());
    }
    if k < 3 {
        return Err(Nonexistence::TooFewDiagonals { n, k }.into());
    }
    if n.is_multiple_of(2) && k % 2 == 1 {
        return Err(Nonexistence::Parity { n, k }.into());
    }
    Ok(())
}

/// Whether a k-diagonal magic square of order `n` exists:
/// `n = k = 1`, or `3 <= k <= n` with `n` odd or `k` even.
pub fn exists(n: usize, k: usize) -> Result<bool, GenerateError> {
    match existence(n, k) {
        Ok(()) => Ok(true),
        Err(GenerateError::Nonexistent(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Moves every entry `(i, j; e)` to `((i + dr) mod n, (j + dc) mod n; e)`.
///
/// Rows and columns are permuted as wholes, so line sums and counts are
/// preserved; the band start moves by `dc - dr`.
pub fn shift(s: &SparseSquare, dr: usize, dc: usize) -> SparseSquare {
    let n = s.order();
    s.map_entries(s.fill(), |c, v| {
        (Cell::new((c.row + dr) % n, (c.col + dc) % n), v)
    })
}

/// A square whose values have been raised by a constant.
///
/// Its values are `offset..offset + kn`, so it is not itself a k-magic square;
/// it exists only as an operand of superimposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffsetSquare {
    n: usize,
    k: usize,
    offset: i64,
    entries: Vec<(Cell, i64)>,
}

impl OffsetSquare {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn fill(&self) -> usize {
        self.k
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn entries(&self) -> impl Iterator<Item = (Cell, i64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn row_sums(&self) -> Vec<i64> {
        let mut sums = vec![0; self.n];
        for (c, v) in self.entries() {
            sums[c.row] += v;
        }
        sums
    }

    pub fn col_sums(&self) -> Vec<i64> {
        let mut sums = vec![0; self.n];
        for (c, v) in self.entries() {
            sums[c.col] += v;
        }
        sums
    }

    /// The line sum every row and column should have: `km + k(nk-1)/2`.
    pub fn expected_line_sum(&self) -> i64 {
        let (n, k) = (self.n as i64, self.k as i64);
        k * self.offset + k * (n * k - 1) / 2
    }
}

/// Adds `m` to every filled cell.
pub fn add_offset(s: &SparseSquare, m: i64) -> OffsetSquare {
    OffsetSquare {
        n: s.order(),
        k: s.fill(),
        offset: m,
        entries: s.entries().map(|(c, v)| (c, v + m)).collect(),
    }
}

/// Merges an `l`-diagonal square `a` with an `m`-diagonal square `b` whose
/// cells are disjoint and whose bands abut. `a` keeps its values; `b` is
/// raised by `l * n`. The result is an `(l + m)`-diagonal magic square.
pub fn superimpose(a: &SparseSquare, b: &SparseSquare) -> Result<SparseSquare, ComposeError> {
    let n = a.order();
    if b.order() != n {
        return Err(ComposeError::OrderMismatch(n, b.order()));
    }
    let width = a.fill() + b.fill();
    if width > n {
        return Err(ComposeError::WidthExceedsOrder { width, n });
    }
    if !verify(a).passed() {
        return Err(ComposeError::NotMagic { which: "first" });
    }
    if !verify(b).passed() {
        return Err(ComposeError::NotMagic { which: "second" });
    }
    merge(a, b)
}

/// The superimposition step without re-verifying the operands.
fn merge(a: &SparseSquare, b: &SparseSquare) -> Result<SparseSquare, ComposeError> {
    let offset = (a.fill() * a.order()) as i64;
    let mut merged = a.clone();
    merged.set_fill(a.fill() + b.fill());
    for (cell, v) in b.entries() {
        merged
            .insert(cell, v + offset)
            .map_err(|_| ComposeError::OverlappingCell(cell))?;
    }
    occupied_band(&merged)
        .map_err(|NotABand { occupied, .. }| ComposeError::NonConsecutiveBand { occupied })?;
    Ok(merged)
}

/// Column-shifts `s` so its band starts at diagonal 0.
pub fn normalize_band(s: &SparseSquare) -> Result<SparseSquare, NotABand> {
    let band = occupied_band(s)?;
    let n = s.order();
    Ok(shift(s, 0, (n - band.start) % n))
}

/// Base widths whose direct constructions are stacked to reach width `k`.
///
/// Parts are sorted in descending order and drawn from `{3, 4, 5}` for odd
/// `n`, `{4, 6}` for even `n`, or the single part `[1]` for `n = k = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    parts: Vec<usize>,
}

impl Decomposition {
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn width(&self) -> usize {
        self.parts.iter().sum()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Canonical decomposition of `k` for order `n`.
///
/// Odd `n`: all 3s, with one 4 when `k = 1 (mod 3)` or one 5 when
/// `k = 2 (mod 3)`. Even `n`: all 4s, with one 6 when `k = 2 (mod 4)`.
pub fn decompose_k(n: usize, k: usize) -> Result<Decomposition, GenerateError> {
    existence(n, k)?;
    if n == 1 {
        return Ok(Decomposition { parts: vec![1] });
    }
    let (lead, rest, unit) = if n % 2 == 1 {
        match k % 3 {
            0 => (None, k, 3),
            1 => (Some(4), k - 4, 3),
            _ => (Some(5), k - 5, 3),
        }
    } else if k.is_multiple_of(4) {
        (None, k, 4)
    } else {
        (Some(6), k - 6, 4)
    };
    let mut parts: Vec<usize> = lead.into_iter().collect();
    parts.extend(std::iter::repeat_n(unit, rest / unit));
    debug_assert_eq!(parts.iter().sum::<usize>(), k);
    Ok(Decomposition { parts })
}

/// Builds the canonical k-diagonal magic square of order `n`, with band
/// `{0, .., k-1}`.
///
/// Each part of the decomposition is built directly, normalized to start at
/// diagonal 0, then shifted right by the total width of the parts before it
/// and superimposed onto the running result.
pub fn generate(n: usize, k: usize) -> Result<SparseSquare, GenerateError> {
    let decomposition = decompose_k(n, k)?;
    if decomposition.parts() == [1] {
        return Ok(construct_trivial());
    }
    let mut acc: Option<SparseSquare> = None;
    let mut placed = 0;
    for &part in decomposition.parts() {
        let base = construct(part, n).unwrap_or_else(|e: ConstructionError| {
            panic!("decomposition part {part} invalid for n = {n}: {e}")
        });
        // Normalize to diagonal 0, then move right past the parts already placed.
        let start = occupied_band(&base)
            .expect("direct constructions occupy a band")
            .start;
        let placed_base = shift(&base, 0, (n - start + placed) % n);
        acc = Some(match acc {
            None => placed_base,
            // Both operands are magic by construction; the sweep and tests
            // verify every generated square independently.
            Some(prev) => merge(&prev, &placed_base)
                .unwrap_or_else(|e| panic!("stacking part {part} at diagonal {placed}: {e}")),
        });
        placed += part;
    }
    Ok(acc.expect("decomposition is non-empty"))
}

/// One `(n, k)` row of a generate-and-verify sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepEntry {
    pub n: usize,
    pub k: usize,
    pub exists: bool,
    pub generated: bool,
    /// Verification of the generated square, if one was produced.
    pub report: Option<VerificationReport>,
}

impl SweepEntry {
    pub fn passed(&self) -> bool {
        self.exists == self.generated && self.report.as_ref().is_none_or(|r| r.passed())
    }
}

/// Runs `generate` and `verify` for all `1 <= k <= n <= max_n`, in order of
/// increasing `n` then `k`.
pub fn sweep(max_n: usize) -> Vec<SweepEntry> {
    sweep_with(max_n, |_, _, _| {})
}

/// Like [`sweep`], handing each generated square to `sink` as it is produced.
pub fn sweep_with(
    max_n: usize,
    mut sink: impl FnMut(usize, usize, &SparseSquare),
) -> Vec<SweepEntry> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for k in 1..=n {
            let exists = exists(n, k).expect("positive parameters");
            let (generated, report) = match generate(n, k) {
                Ok(s) => {
                    sink(n, k, &s);
                    (true, Some(verify(&s)))
                }
                Err(_) => (false, None),
            };
            out.push(SweepEntry {
                n,
                k,
                exists,
                generated,
                report,
            });
        }
    }
    out
}

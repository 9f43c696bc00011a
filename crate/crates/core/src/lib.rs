//! Construction, verification and exhaustive search of k-diagonal magic
//! squares.
//!
//! A k-diagonal magic square of order `n` places each of `0..kn` exactly once
//! in an `n x n` grid so that every row and column holds `k` entries with a
//! common sum `k(kn-1)/2`, and every entry lies on one of `k` cyclically
//! consecutive broken diagonals. Such a square exists exactly when
//! `n = k = 1`, or `3 <= k <= n` with `n` odd or `k` even.
//!
//! - [`square`]: the data model and [`verify`].
//! - [`construct`]: direct constructions for widths 3, 4, 5 and 6.
//! - [`compose`]: shifts, superimposition and [`generate`] for any feasible `(n, k)`.
//! - [`oracle`]: backtracking search for small orders.
//! - [`document`]: JSON, CSV and ASCII forms.

pub mod compose;
pub mod construct;
pub mod document;
pub mod oracle;
pub mod square;

pub use compose::{exists, generate, superimpose, GenerateError, Nonexistence};
pub use square::{magic_sum, verify, Cell, DiagonalBand, SparseSquare, VerificationReport};

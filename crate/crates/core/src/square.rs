//! Partially filled squares, diagonal arithmetic and verification of the
//! k-diagonal magic property.

use std::fmt;

use thiserror::Error;

/// A `(row, col)` coordinate in an `n x n` grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SquareError {
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("fill count {k} is outside 1..={n}")]
    FillOutOfRange { n: usize, k: usize },
    #[error("cell {cell} lies outside a square of order {n}")]
    CellOutOfRange { cell: Cell, n: usize },
    #[error("cell {cell} is filled twice")]
    DuplicateCell { cell: Cell },
}

/// Reasons a magic sum cannot be produced for `(n, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MagicSumError {
    #[error("order {n} with fill count {k} is out of range (need n >= 1, 1 <= k <= n)")]
    OutOfRange { n: usize, k: usize },
    #[error("k(kn-1)/2 is not an integer for n = {n}, k = {k} (n even, k odd)")]
    InfeasibleParity { n: usize, k: usize },
}

/// The common line sum `k(kn-1)/2` of a k-magic square of order `n`.
///
/// When `n` is even and `k` is odd the quantity is a half-integer, so no such
/// square can exist; that case is reported as [`MagicSumError::InfeasibleParity`].
pub fn magic_sum(n: usize, k: usize) -> Result<i64, MagicSumError> {
    if n == 0 || k == 0 || k > n {
        return Err(MagicSumError::OutOfRange { n, k });
    }
    let (nn, kk) = (n as i64, k as i64);
    let twice = kk * (kk * nn - 1);
    if twice % 2 != 0 {
        return Err(MagicSumError::InfeasibleParity { n, k });
    }
    Ok(twice / 2)
}

/// Index of the broken diagonal through `cell`: `(col - row) mod n`.
pub fn diagonal_index(cell: Cell, n: usize) -> usize {
    debug_assert!(cell.row < n && cell.col < n);
    (cell.col + n - cell.row) % n
}

/// A run of `width` cyclically consecutive diagonals starting at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiagonalBand {
    pub modulus: usize,
    pub start: usize,
    pub width: usize,
}

impl DiagonalBand {
    pub fn new(modulus: usize, start: usize, width: usize) -> Option<Self> {
        (modulus >= 1 && start < modulus && (1..=modulus).contains(&width)).then_some(Self {
            modulus,
            start,
            width,
        })
    }

    /// Diagonal indices covered by the band, in band order.
    pub fn diagonals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).map(move |t| (self.start + t) % self.modulus)
    }

    pub fn contains(&self, diagonal: usize) -> bool {
        (diagonal + self.modulus - self.start) % self.modulus < self.width
    }
}

impl fmt::Display for DiagonalBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = (self.start + self.width - 1) % self.modulus;
        write!(
            f,
            "diagonals {}..{} (width {}, mod {})",
            self.start, last, self.width, self.modulus
        )
    }
}

/// Occupied diagonals do not form a single consecutive run of the expected width.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("occupied diagonals {occupied:?} are not {expected_width} consecutive diagonals")]
pub struct NotABand {
    pub occupied: Vec<usize>,
    pub expected_width: usize,
}

/// An `n x n` square with some cells filled by integers.
///
/// Construction only guarantees that cells are in range and unique; the
/// k-magic invariants (k cells per line, values `0..kn`) are checked by
/// [`verify`], which accepts arbitrary candidates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseSquare {
    n: usize,
    k: usize,
    /// Row-major `n * n` grid.
    cells: Vec<Option<i64>>,
    filled: usize,
}

impl SparseSquare {
    /// An empty square of order `n` intended to hold `k` cells per line.
    pub fn empty(n: usize, k: usize) -> Result<Self, SquareError> {
        if n == 0 {
            return Err(SquareError::ZeroOrder);
        }
        if k == 0 || k > n {
            return Err(SquareError::FillOutOfRange { n, k });
        }
        Ok(Self::blank(n, k))
    }

    fn blank(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            cells: vec![None; n * n],
            filled: 0,
        }
    }

    /// Builds a square from `(cell, value)` pairs, rejecting out-of-range and
    /// repeated cells.
    pub fn from_entries<I>(n: usize, k: usize, entries: I) -> Result<Self, SquareError>
    where
        I: IntoIterator<Item = (Cell, i64)>,
    {
        let mut square = Self::empty(n, k)?;
        for (cell, value) in entries {
            square.insert(cell, value)?;
        }
        Ok(square)
    }

    /// Like [`SparseSquare::from_entries`] but tolerates any `k`, including
    /// zero or `k > n`, so that malformed candidates can still be verified.
    pub fn from_entries_unchecked_fill<I>(
        n: usize,
        k: usize,
        entries: I,
    ) -> Result<Self, SquareError>
    where
        I: IntoIterator<Item = (Cell, i64)>,
    {
        if n == 0 {
            return Err(SquareError::ZeroOrder);
        }
        let mut square = Self::blank(n, k);
        for (cell, value) in entries {
            square.insert(cell, value)?;
        }
        Ok(square)
    }

    pub fn insert(&mut self, cell: Cell, value: i64) -> Result<(), SquareError> {
        if cell.row >= self.n || cell.col >= self.n {
            return Err(SquareError::CellOutOfRange { cell, n: self.n });
        }
        let slot = &mut self.cells[cell.row * self.n + cell.col];
        if slot.is_some() {
            return Err(SquareError::DuplicateCell { cell });
        }
        *slot = Some(value);
        self.filled += 1;
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn fill(&self) -> usize {
        self.k
    }

    pub fn get(&self, row: usize, col: usize) -> Option<i64> {
        if row < self.n && col < self.n {
            self.cells[row * self.n + col]
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.filled
    }

    pub fn is_empty(&self) -> bool {
        self.filled == 0
    }

    /// Filled cells in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (Cell, i64)> + '_ {
        let n = self.n;
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(i, v)| v.map(|v| (Cell::new(i / n, i % n), v)))
    }

    pub(crate) fn map_entries(&self, k: usize, f: impl Fn(Cell, i64) -> (Cell, i64)) -> Self {
        let mut out = Self::blank(self.n, k);
        for (c, v) in self.entries() {
            let (c, v) = f(c, v);
            out.insert(c, v)
                .expect("cell map must be injective and in range");
        }
        out
    }

    pub(crate) fn set_fill(&mut self, k: usize) {
        self.k = k;
    }

    /// Row `r` as a dense vector, `None` for empty cells.
    pub fn row(&self, r: usize) -> Vec<Option<i64>> {
        self.cells[r * self.n..(r + 1) * self.n].to_vec()
    }
}

pub fn row_sums(s: &SparseSquare) -> Vec<i64> {
    let mut sums = vec![0; s.order()];
    for (cell, v) in s.entries() {
        sums[cell.row] += v;
    }
    sums
}

pub fn col_sums(s: &SparseSquare) -> Vec<i64> {
    let mut sums = vec![0; s.order()];
    for (cell, v) in s.entries() {
        sums[cell.col] += v;
    }
    sums
}

/// Sorted set of diagonal indices holding at least one entry.
pub fn occupied_diagonals(s: &SparseSquare) -> Vec<usize> {
    let n = s.order();
    let mut present = vec![false; n];
    for (c, _) in s.entries() {
        present[diagonal_index(c, n)] = true;
    }
    (0..n).filter(|&d| present[d]).collect()
}

/// The band of `k` consecutive diagonals holding every entry of `s`.
///
/// When all `n` diagonals are occupied (only possible for `k = n`) the band
/// is reported with start 0.
pub fn occupied_band(s: &SparseSquare) -> Result<DiagonalBand, NotABand> {
    let n = s.order();
    let k = s.fill();
    let occupied = occupied_diagonals(s);
    let fail = || NotABand {
        occupied: occupied.clone(),
        expected_width: k,
    };
    if occupied.len() != k || k == 0 || k > n {
        return Err(fail());
    }
    if k == n {
        return Ok(DiagonalBand {
            modulus: n,
            start: 0,
            width: n,
        });
    }
    let mut present = vec![false; n];
    for &d in &occupied {
        present[d] = true;
    }
    // A proper subset that is a single run has exactly one diagonal whose
    // predecessor is unoccupied.
    let mut starts = occupied
        .iter()
        .copied()
        .filter(|&d| !present[(d + n - 1) % n]);
    match (starts.next(), starts.next()) {
        (Some(start), None) => Ok(DiagonalBand {
            modulus: n,
            start,
            width: k,
        }),
        _ => Err(fail()),
    }
}

/// What a failed check observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Order or fill count out of range, or the wrong number of filled cells.
    Order {
        n: usize,
        k: usize,
        filled: usize,
    },
    DuplicateValue(i64),
    OutOfRangeValue(i64),
    MissingValue(i64),
    RowCount {
        row: usize,
        filled: usize,
    },
    ColumnCount {
        col: usize,
        filled: usize,
    },
    RowSum {
        row: usize,
        sum: i64,
    },
    ColumnSum {
        col: usize,
        sum: i64,
    },
    /// No integral magic sum exists for this `(n, k)`.
    NoMagicSum,
    NotABand {
        occupied: Vec<usize>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Order { n, k, filled } => {
                write!(
                    f,
                    "order n={n}, k={k} with {filled} filled cells (expected k*n = {})",
                    n * k
                )
            }
            Violation::DuplicateValue(v) => write!(f, "value {v} appears more than once"),
            Violation::OutOfRangeValue(v) => write!(f, "value {v} is outside 0..kn-1"),
            Violation::MissingValue(v) => write!(f, "value {v} is missing"),
            Violation::RowCount { row, filled } => write!(f, "row {row} has {filled} filled cells"),
            Violation::ColumnCount { col, filled } => {
                write!(f, "column {col} has {filled} filled cells")
            }
            Violation::RowSum { row, sum } => write!(f, "row {row} sums to {sum}"),
            Violation::ColumnSum { col, sum } => write!(f, "column {col} sums to {sum}"),
            Violation::NoMagicSum => write!(f, "k(kn-1)/2 is not a valid magic sum for this order"),
            Violation::NotABand { occupied } => {
                write!(
                    f,
                    "occupied diagonals {occupied:?} are not k consecutive diagonals"
                )
            }
        }
    }
}

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub ok: bool,
    pub counterexample: Option<Violation>,
}

impl Check {
    fn pass() -> Self {
        Self {
            ok: true,
            counterexample: None,
        }
    }

    fn fail(v: Violation) -> Self {
        Self {
            ok: false,
            counterexample: Some(v),
        }
    }

    fn from_first(v: Option<Violation>) -> Self {
        v.map_or_else(Self::pass, Self::fail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub order_ok: Check,
    pub value_set_ok: Check,
    pub row_count_ok: Check,
    pub col_count_ok: Check,
    pub row_sum_ok: Check,
    pub col_sum_ok: Check,
    pub band_ok: Check,
    /// `k(kn-1)/2`, or `None` when that is not an integer or `(n, k)` is out of range.
    pub magic_sum: Option<i64>,
    pub band: Option<DiagonalBand>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.ok)
    }

    /// The seven checks with stable names, in evaluation order.
    pub fn checks(&self) -> [(&'static str, &Check); 7] {
        [
            ("order", &self.order_ok),
            ("value_set", &self.value_set_ok),
            ("row_count", &self.row_count_ok),
            ("col_count", &self.col_count_ok),
            ("row_sum", &self.row_sum_ok),
            ("col_sum", &self.col_sum_ok),
            ("band", &self.band_ok),
        ]
    }

    pub fn failures(&self) -> impl Iterator<Item = (&'static str, &Violation)> + '_ {
        self.checks()
            .into_iter()
            .filter_map(|(name, c)| c.counterexample.as_ref().map(|v| (name, v)))
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, check) in self.checks() {
            match &check.counterexample {
                None => writeln!(f, "{name:<10} ok")?,
                Some(v) => writeln!(f, "{name:<10} FAIL: {v}")?,
            }
        }
        match self.magic_sum {
            Some(s) => writeln!(f, "magic sum  {s}")?,
            None => writeln!(f, "magic sum  undefined")?,
        }
        if let Some(band) = &self.band {
            writeln!(f, "band       {band}")?;
        }
        write!(
            f,
            "result     {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Runs every check on `s` independently and reports all of them.
pub fn verify(s: &SparseSquare) -> VerificationReport {
    let n = s.order();
    let k = s.fill();
    let kn = (k * n) as i64;

    let order_ok =
        Check::from_first(
            (k == 0 || k > n || s.len() != k * n).then(|| Violation::Order {
                n,
                k,
                filled: s.len(),
            }),
        );

    let value_set_ok = {
        let mut seen = vec![false; k * n];
        let mut duplicate = None;
        let mut out_of_range = None;
        for (_, v) in s.entries() {
            if (0..kn).contains(&v) {
                let slot = &mut seen[v as usize];
                if *slot {
                    duplicate = duplicate.or(Some(v));
                }
                *slot = true;
            } else {
                out_of_range = out_of_range.or(Some(v));
            }
        }
        let missing = seen.iter().position(|&b| !b).map(|v| v as i64);
        Check::from_first(
            duplicate
                .map(Violation::DuplicateValue)
                .or(out_of_range.map(Violation::OutOfRangeValue))
                .or(missing.map(Violation::MissingValue)),
        )
    };

    let mut row_counts = vec![0usize; n];
    let mut col_counts = vec![0usize; n];
    for (cell, _) in s.entries() {
        row_counts[cell.row] += 1;
        col_counts[cell.col] += 1;
    }
    let row_count_ok =
        Check::from_first(
            row_counts
                .iter()
                .position(|&c| c != k)
                .map(|row| Violation::RowCount {
                    row,
                    filled: row_counts[row],
                }),
        );
    let col_count_ok = Check::from_first(col_counts.iter().position(|&c| c != k).map(|col| {
        Violation::ColumnCount {
            col,
            filled: col_counts[col],
        }
    }));

    let target = magic_sum(n, k).ok();
    let line_check = |sums: Vec<i64>, make: fn(usize, i64) -> Violation| match target {
        None => Check::fail(Violation::NoMagicSum),
        Some(t) => Check::from_first(sums.iter().position(|&x| x != t).map(|i| make(i, sums[i]))),
    };
    let row_sum_ok = line_check(row_sums(s), |row, sum| Violation::RowSum { row, sum });
    let col_sum_ok = line_check(col_sums(s), |col, sum| Violation::ColumnSum { col, sum });

    let (band_ok, band) = match occupied_band(s) {
        Ok(b) => (Check::pass(), Some(b)),
        Err(e) => (
            Check::fail(Violation::NotABand {
                occupied: e.occupied,
            }),
            None,
        ),
    };

    VerificationReport {
        order_ok,
        value_set_ok,
        row_count_ok,
        col_count_ok,
        row_sum_ok,
        col_sum_ok,
        band_ok,
        magic_sum: target,
        band,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lo_shu_zero_based() -> SparseSquare {
        let rows = [[1, 6, 5], [8, 4, 0], [3, 2, 7]];
        SparseSquare::from_entries(
            3,
            3,
            rows.iter().enumerate().flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(c, &v)| (Cell::new(r, c), v))
            }),
        )
        .unwrap()
    }

    #[test]
    fn magic_sum_values() {
        assert_eq!(magic_sum(9, 3), Ok(39));
        assert_eq!(magic_sum(1, 1), Ok(0));
        assert_eq!(
            magic_sum(4, 3),
            Err(MagicSumError::InfeasibleParity { n: 4, k: 3 })
        );
        assert_eq!(magic_sum(9, 4), Ok(70));
        assert_eq!(magic_sum(11, 5), Ok(135));
        assert_eq!(magic_sum(10, 6), Ok(177));
        assert_eq!(magic_sum(9, 7), Ok(217));
    }

    #[test]
    fn magic_sum_rejects_out_of_range() {
        assert!(matches!(
            magic_sum(0, 1),
            Err(MagicSumError::OutOfRange { .. })
        ));
        assert!(matches!(
            magic_sum(3, 0),
            Err(MagicSumError::OutOfRange { .. })
        ));
        assert!(matches!(
            magic_sum(3, 4),
            Err(MagicSumError::OutOfRange { .. })
        ));
    }

    #[test]
    fn diagonal_index_examples() {
        assert_eq!(diagonal_index(Cell::new(0, 6), 9), 6);
        assert_eq!(diagonal_index(Cell::new(8, 0), 9), 1);
        assert_eq!(diagonal_index(Cell::new(5, 5), 9), 0);
    }

    #[test]
    fn full_square_band_starts_at_zero() {
        let s = lo_shu_zero_based();
        assert_eq!(
            occupied_band(&s),
            Ok(DiagonalBand {
                modulus: 3,
                start: 0,
                width: 3
            })
        );
        let report = verify(&s);
        assert!(report.passed(), "{report}");
        assert_eq!(report.magic_sum, Some(12));
    }

    #[test]
    fn band_detection_wraps() {
        // k = 2 on diagonals {4, 0} of order 5.
        let n = 5;
        let cells = (0..n).flat_map(|i| [Cell::new(i, (i + 4) % n), Cell::new(i, i)]);
        let s = SparseSquare::from_entries(n, 2, cells.zip(0..)).unwrap();
        assert_eq!(occupied_band(&s).unwrap().start, 4);
    }

    #[test]
    fn gap_is_not_a_band() {
        let n = 5;
        let cells = (0..n).flat_map(|i| [Cell::new(i, i), Cell::new(i, (i + 2) % n)]);
        let s = SparseSquare::from_entries(n, 2, cells.zip(0..)).unwrap();
        let err = occupied_band(&s).unwrap_err();
        assert_eq!(err.occupied, vec![0, 2]);
        let report = verify(&s);
        assert!(!report.band_ok.ok);
        assert!(report.row_count_ok.ok && report.col_count_ok.ok);
    }

    #[test]
    fn single_cell_square() {
        let s = SparseSquare::from_entries(1, 1, [(Cell::new(0, 0), 0)]).unwrap();
        assert_eq!(row_sums(&s), vec![0]);
        assert!(verify(&s).passed());
    }

    #[test]
    fn empty_one_by_one_fails_counts() {
        let s = SparseSquare::empty(1, 1).unwrap();
        let r = verify(&s);
        assert!(!r.passed());
        assert_eq!(
            r.row_count_ok.counterexample,
            Some(Violation::RowCount { row: 0, filled: 0 })
        );
        assert_eq!(
            r.value_set_ok.counterexample,
            Some(Violation::MissingValue(0))
        );
    }

    #[test]
    fn duplicate_value_is_named() {
        let mut entries: Vec<_> = lo_shu_zero_based().entries().collect();
        let pos = entries.iter().position(|&(_, v)| v == 0).unwrap();
        entries[pos].1 = 1;
        let s = SparseSquare::from_entries(3, 3, entries).unwrap();
        let r = verify(&s);
        assert_eq!(
            r.value_set_ok.counterexample,
            Some(Violation::DuplicateValue(1))
        );
        assert!(!r.row_sum_ok.ok);
        assert!(r.band_ok.ok);
    }

    #[test]
    fn parity_infeasible_sum_fails_line_checks() {
        let cells = (0..4).flat_map(|i| (0..3).map(move |d| Cell::new(i, (i + d) % 4)));
        let s = SparseSquare::from_entries(4, 3, cells.zip(0..)).unwrap();
        let r = verify(&s);
        assert_eq!(r.magic_sum, None);
        assert_eq!(r.row_sum_ok.counterexample, Some(Violation::NoMagicSum));
        assert!(r.order_ok.ok && r.value_set_ok.ok && r.band_ok.ok);
    }

    #[test]
    fn insert_rejects_bad_cells() {
        let mut s = SparseSquare::empty(3, 1).unwrap();
        assert!(matches!(
            s.insert(Cell::new(3, 0), 0),
            Err(SquareError::CellOutOfRange { .. })
        ));
        s.insert(Cell::new(0, 0), 0).unwrap();
        assert!(matches!(
            s.insert(Cell::new(0, 0), 1),
            Err(SquareError::DuplicateCell { .. })
        ));
        assert!(SparseSquare::empty(3, 4).is_err());
        assert!(SparseSquare::empty(0, 0).is_err());
    }

    #[test]
    fn band_contains() {
        let b = DiagonalBand::new(9, 6, 7).unwrap();
        assert_eq!(b.diagonals().collect::<Vec<_>>(), vec![6, 7, 8, 0, 1, 2, 3]);
        assert!(b.contains(0) && b.contains(3) && !b.contains(4) && !b.contains(5));
        assert!(DiagonalBand::new(9, 9, 1).is_none());
        assert!(DiagonalBand::new(3, 0, 4).is_none());
    }

    proptest! {
        #[test]
        fn diagonal_constant_along_broken_diagonal(n in 1usize..40, r in 0usize..40, c in 0usize..40) {
            let (r, c) = (r % n, c % n);
            let next = Cell::new((r + 1) % n, (c + 1) % n);
            prop_assert_eq!(diagonal_index(Cell::new(r, c), n), diagonal_index(next, n));
            prop_assert!(diagonal_index(Cell::new(r, c), n) < n);
        }

        #[test]
        fn verify_is_pure(values in proptest::collection::vec(-2i64..12, 9)) {
            let cells = (0..3).flat_map(|r| (0..3).map(move |c| Cell::new(r, c)));
            let s = SparseSquare::from_entries(3, 3, cells.zip(values)).unwrap();
            prop_assert_eq!(verify(&s), verify(&s));
        }
    }
}

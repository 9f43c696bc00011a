//! Exhaustive backtracking search for k-diagonal magic squares at small
//! orders, used as ground truth for the closed-form existence test and the
//! direct constructions.
//!
//! The band is fixed at diagonals `0..k`. Any k-diagonal magic square can be
//! column-shifted onto that band without changing its line sums, so this
//! loses no generality for existence questions.

use std::fmt;

use thiserror::Error;

use crate::compose::exists;
use crate::square::{magic_sum, verify, Cell, MagicSumError, SparseSquare};

/// Default cap on placements tried by one search.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Largest `k * n` the search accepts; the used-value set is a `u128`.
pub const MAX_CELLS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("need n >= 1 and 1 <= k <= n, got n = {n}, k = {k}")]
    OutOfRange { n: usize, k: usize },
    #[error("k * n = {0} exceeds the search limit of {MAX_CELLS} cells")]
    TooLarge(usize),
    #[error("solution limit and node budget must be positive when given")]
    ZeroLimit,
}

/// Which partial-sum tests prune the search tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pruning {
    /// Full lines must hit the magic sum exactly, and partial lines must be
    /// completable from the unused values.
    #[default]
    Bounds,
    /// Lines are checked only once every cell is filled. Exists to test that
    /// [`Pruning::Bounds`] never discards a solution.
    LeavesOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    pub k: usize,
    pub solution_limit: Option<usize>,
    pub node_budget: Option<u64>,
    pub pruning: Pruning,
}

impl SearchConfig {
    /// Unlimited solutions, [`DEFAULT_NODE_BUDGET`] nodes, bound pruning.
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            solution_limit: None,
            node_budget: Some(DEFAULT_NODE_BUDGET),
            pruning: Pruning::Bounds,
        }
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.solution_limit = Some(limit);
        self
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn with_pruning(mut self, pruning: Pruning) -> Self {
        self.pruning = pruning;
        self
    }

    fn validate(&self) -> Result<(), OracleError> {
        if self.n == 0 || self.k == 0 || self.k > self.n {
            return Err(OracleError::OutOfRange {
                n: self.n,
                k: self.k,
            });
        }
        if self.n * self.k > MAX_CELLS {
            return Err(OracleError::TooLarge(self.n * self.k));
        }
        if self.solution_limit == Some(0) || self.node_budget == Some(0) {
            return Err(OracleError::ZeroLimit);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub solutions: Vec<SparseSquare>,
    /// True when the whole (pruned) tree was covered.
    pub exhausted: bool,
    pub nodes_visited: u64,
}

/// The `kn` cells of the band on diagonals `0..k`, row by row.
///
/// Each row's cells are contiguous in this order, so a row closes every `k`
/// cells and column `j` closes at row `j` (or at the wrap for `j < k - 1`).
pub fn band_cells(n: usize, k: usize) -> Result<Vec<Cell>, OracleError> {
    if n == 0 || k == 0 || k > n {
        return Err(OracleError::OutOfRange { n, k });
    }
    Ok((0..n)
        .flat_map(|i| (0..k).map(move |d| Cell::new(i, (i + d) % n)))
        .collect())
}

enum Flow {
    Continue,
    Stop,
}

struct Search<'a> {
    cfg: &'a SearchConfig,
    cells: Vec<Cell>,
    target: i64,
    all: u128,
    used: u128,
    values: Vec<i64>,
    row_sum: Vec<i64>,
    col_sum: Vec<i64>,
    row_left: Vec<usize>,
    col_left: Vec<usize>,
    nodes: u64,
    truncated: bool,
    solutions: Vec<SparseSquare>,
}

impl Search<'_> {
    /// Sum of the `count` smallest (or largest) values not yet used.
    fn extreme_unused(&self, count: usize, largest: bool) -> i64 {
        let mut free = self.all & !self.used;
        let mut total = 0;
        for _ in 0..count {
            if free == 0 {
                return if largest { i64::MIN } else { i64::MAX };
            }
            let bit = if largest {
                127 - free.leading_zeros()
            } else {
                free.trailing_zeros()
            };
            total += bit as i64;
            free &= !(1u128 << bit);
        }
        total
    }

    fn line_feasible(&self, sum: i64, left: usize) -> bool {
        if left == 0 {
            return sum == self.target;
        }
        let need = self.target - sum;
        self.extreme_unused(left, false) <= need && need <= self.extreme_unused(left, true)
    }

    fn record_solution(&mut self) -> Flow {
        if self.cfg.pruning == Pruning::LeavesOnly
            && !(self.row_sum.iter().chain(&self.col_sum)).all(|&s| s == self.target)
        {
            return Flow::Continue;
        }
        let square = SparseSquare::from_entries(
            self.cfg.n,
            self.cfg.k,
            self.cells.iter().copied().zip(self.values.iter().copied()),
        )
        .expect("band cells are distinct");
        let report = verify(&square);
        assert!(
            report.passed(),
            "search emitted an invalid square:\n{report}"
        );
        self.solutions.push(square);
        match self.cfg.solution_limit {
            Some(limit) if self.solutions.len() >= limit => Flow::Stop,
            _ => Flow::Continue,
        }
    }

    fn dfs(&mut self, idx: usize) -> Flow {
        if idx == self.cells.len() {
            return self.record_solution();
        }
        let Cell { row, col } = self.cells[idx];
        let bounded = self.cfg.pruning == Pruning::Bounds;
        let mut free = self.all & !self.used;
        while free != 0 {
            let bit = free.trailing_zeros();
            free &= free - 1;
            let v = bit as i64;
            if bounded
                && (self.row_sum[row] + v > self.target || self.col_sum[col] + v > self.target)
            {
                // Values are tried in ascending order; larger ones overshoot too.
                break;
            }
            if self.cfg.node_budget.is_some_and(|b| self.nodes >= b) {
                self.truncated = true;
                return Flow::Stop;
            }
            self.nodes += 1;

            self.used |= 1u128 << bit;
            self.values[idx] = v;
            self.row_sum[row] += v;
            self.col_sum[col] += v;
            self.row_left[row] -= 1;
            self.col_left[col] -= 1;

            let viable = !bounded
                || (self.line_feasible(self.row_sum[row], self.row_left[row])
                    && self.line_feasible(self.col_sum[col], self.col_left[col]));
            let flow = if viable {
                self.dfs(idx + 1)
            } else {
                Flow::Continue
            };

            self.used &= !(1u128 << bit);
            self.row_sum[row] -= v;
            self.col_sum[col] -= v;
            self.row_left[row] += 1;
            self.col_left[col] += 1;

            if let Flow::Stop = flow {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }
}

/// Depth-first search assigning `0..kn` to the band cells in ascending value
/// order. Deterministic for a given config.
pub fn search(cfg: &SearchConfig) -> Result<SearchOutcome, OracleError> {
    cfg.validate()?;
    let (n, k) = (cfg.n, cfg.k);
    let target = match magic_sum(n, k) {
        Ok(t) => t,
        Err(MagicSumError::InfeasibleParity { .. }) => {
            return Ok(SearchOutcome {
                solutions: Vec::new(),
                exhausted: true,
                nodes_visited: 0,
            });
        }
        Err(MagicSumError::OutOfRange { .. }) => return Err(OracleError::OutOfRange { n, k }),
    };
    let cells = band_cells(n, k)?;
    let kn = cells.len();
    let mut state = Search {
        cfg,
        target,
        all: if kn == 128 {
            u128::MAX
        } else {
            (1u128 << kn) - 1
        },
        used: 0,
        values: vec![0; kn],
        row_sum: vec![0; n],
        col_sum: vec![0; n],
        row_left: vec![k; n],
        col_left: vec![k; n],
        nodes: 0,
        truncated: false,
        solutions: Vec::new(),
        cells,
    };
    let flow = state.dfs(0);
    let exhausted = matches!(flow, Flow::Continue) && !state.truncated;
    Ok(SearchOutcome {
        solutions: state.solutions,
        exhausted,
        nodes_visited: state.nodes,
    })
}

/// Brute-force answer to "does a k-diagonal magic square of order n exist?".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BruteForce {
    Exists,
    Absent,
    /// The node budget ran out before a solution was found.
    Inconclusive,
}

impl BruteForce {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            BruteForce::Exists => Some(true),
            BruteForce::Absent => Some(false),
            BruteForce::Inconclusive => None,
        }
    }
}

impl fmt::Display for BruteForce {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BruteForce::Exists => "exists",
            BruteForce::Absent => "absent",
            BruteForce::Inconclusive => "inconclusive",
        })
    }
}

pub fn exists_bruteforce(n: usize, k: usize) -> Result<BruteForce, OracleError> {
    exists_bruteforce_with_budget(n, k, Some(DEFAULT_NODE_BUDGET))
}

pub fn exists_bruteforce_with_budget(
    n: usize,
    k: usize,
    budget: Option<u64>,
) -> Result<BruteForce, OracleError> {
    let outcome = search(&SearchConfig::new(n, k).with_limit(1).with_budget(budget))?;
    Ok(if !outcome.solutions.is_empty() {
        BruteForce::Exists
    } else if outcome.exhausted {
        BruteForce::Absent
    } else {
        BruteForce::Inconclusive
    })
}

/// A pair where the closed form and the search did not agree, or the search
/// could not decide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub n: usize,
    pub k: usize,
    pub closed_form: bool,
    pub oracle: BruteForce,
}

/// Compares the closed-form existence test with brute force for every
/// `1 <= k <= n <= max_n`.
pub fn cross_check(max_n: usize) -> Result<Vec<Disagreement>, OracleError> {
    let pairs: Vec<_> = (1..=max_n)
        .flat_map(|n| (1..=n).map(move |k| (n, k)))
        .collect();
    cross_check_pairs(&pairs)
}

pub fn cross_check_pairs(pairs: &[(usize, usize)]) -> Result<Vec<Disagreement>, OracleError> {
    let mut out = Vec::new();
    for &(n, k) in pairs {
        let closed_form = exists(n, k).map_err(|_| OracleError::OutOfRange { n, k })?;
        let oracle = exists_bruteforce(n, k)?;
        if oracle.as_bool() != Some(closed_form) {
            out.push(Disagreement {
                n,
                k,
                closed_form,
                oracle,
            });
        }
    }
    Ok(out)
}

//! Direct constructions of 3-, 4-, 5- and 6-diagonal magic squares, plus the
//! order-1 square.
//!
//! Each construction is a table of diagonal families `(row, col; value)`
//! parameterised by an index `i`. Row and column expressions are reduced
//! modulo `n` on insertion. A family that lands on an already filled cell is a
//! bug in the table and aborts with a panic naming the cell.

use thiserror::Error;

use crate::square::{Cell, SparseSquare};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("a {width}-diagonal construction requires {requirement}; got n = {n}")]
    Precondition {
        width: usize,
        n: usize,
        requirement: &'static str,
    },
    #[error("no direct construction for width {0}")]
    UnsupportedWidth(usize),
}

struct Builder {
    n: i64,
    square: SparseSquare,
}

impl Builder {
    fn new(n: usize, k: usize) -> Self {
        let square =
            SparseSquare::empty(n, k).expect("constructor preconditions imply 1 <= k <= n");
        Self {
            n: n as i64,
            square,
        }
    }

    fn put(&mut self, row: i64, col: i64, value: i64) {
        let cell = Cell::new(
            row.rem_euclid(self.n) as usize,
            col.rem_euclid(self.n) as usize,
        );
        if let Err(e) = self.square.insert(cell, value) {
            panic!("construction table writes {cell} twice (value {value}): {e}");
        }
    }

    /// Places one family for `i` in `0..=last` and asserts it wrote `expected` cells.
    fn family(&mut self, last: i64, expected: i64, f: impl Fn(i64) -> (i64, i64, i64)) {
        let before = self.square.len();
        for i in 0..=last {
            let (r, c, v) = f(i);
            self.put(r, c, v);
        }
        assert_eq!(
            (self.square.len() - before) as i64,
            expected,
            "family cell count"
        );
    }

    fn finish(self) -> SparseSquare {
        assert_eq!(self.square.len(), self.square.fill() * self.square.order());
        self.square
    }
}

/// Exact division by two; the tables only halve even numerators.
fn half(x: i64) -> i64 {
    assert!(x % 2 == 0, "odd numerator {x} in a halved expression");
    x / 2
}

/// The 1-diagonal magic square of order 1: a single 0.
pub fn construct_trivial() -> SparseSquare {
    SparseSquare::from_entries(1, 1, [(Cell::new(0, 0), 0)]).expect("order-1 square")
}

/// 3-diagonal magic square of odd order `n >= 3`, occupying diagonals
/// `n-3, n-2, n-1`.
pub fn construct_k3(n: usize) -> Result<SparseSquare, ConstructionError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(ConstructionError::Precondition {
            width: 3,
            n,
            requirement: "odd n >= 3",
        });
    }
    let mut b = Builder::new(n, 3);
    let n = n as i64;
    let (m, m3) = ((n - 1) / 2, (n - 3) / 2);

    // Values 0..n-1.
    b.family(m, m + 1, |i| (2 * i, n + 2 * i - 3, half(n - 2 * i - 1)));
    b.family(m3, m3 + 1, |i| (2 * i + 1, n + 2 * i - 2, n - i - 1));
    // Values 2n..3n-1.
    b.family(n - 1, n, |i| (i, n + i - 2, 2 * n + i));
    // Values n..2n-1.
    b.family(m, m + 1, |i| (2 * i, n + 2 * i - 1, 2 * n - i - 1));
    b.family(m3, m3 + 1, |i| (2 * i + 1, 2 * i, half(3 * n - 2 * i - 3)));
    Ok(b.finish())
}

/// 4-diagonal magic square of order `n >= 4`, occupying diagonals 1..=4.
pub fn construct_k4(n: usize) -> Result<SparseSquare, ConstructionError> {
    if n < 4 {
        return Err(ConstructionError::Precondition {
            width: 4,
            n,
            requirement: "n >= 4",
        });
    }
    let mut b = Builder::new(n, 4);
    let n = n as i64;
    b.family(n - 1, n, |i| (i, i + 1, i));
    b.family(n - 1, n, |i| (i, i + 2, 4 * n - i - 1));
    b.family(n - 1, n, |i| (n + i - 2, i + 1, 3 * n - i - 1));
    b.family(n - 1, n, |i| (n + i - 2, i + 2, n + i));
    Ok(b.finish())
}

/// 5-diagonal magic square of odd order `n >= 5`, occupying diagonals 1..=5.
/// Diagonal `d` holds exactly the values `n(d-1)..nd`.
pub fn construct_k5(n: usize) -> Result<SparseSquare, ConstructionError> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(ConstructionError::Precondition {
            width: 5,
            n,
            requirement: "odd n >= 5",
        });
    }
    let mut b = Builder::new(n, 5);
    let n = n as i64;
    let (m, m3) = ((n - 1) / 2, (n - 3) / 2);

    b.family(n - 1, n, |i| (i, i + 1, i));

    b.family(m, m + 1, |i| (n + 2 * i - 1, 2 * i + 1, 2 * n - i - 1));
    b.family(m3, m3 + 1, |i| (2 * i, 2 * i + 2, half(3 * n - 3) - i));

    b.family(n - 1, n, |i| (i, i + 3, 3 * n - i - 1));

    b.family(m, m + 1, |i| (n + 2 * i - 2, 2 * i + 2, 4 * n - i - 1));
    b.family(m3, m3 + 1, |i| {
        (n + 2 * i - 1, 2 * i + 3, half(7 * n - 3) - i)
    });

    b.family(n - 1, n, |i| (n + i - 2, i + 3, 4 * n + i));
    Ok(b.finish())
}

/// 6-diagonal magic square of order `n >= 6`, occupying diagonals 1..=6.
pub fn construct_k6(n: usize) -> Result<SparseSquare, ConstructionError> {
    if n < 6 {
        return Err(ConstructionError::Precondition {
            width: 6,
            n,
            requirement: "n >= 6",
        });
    }
    let mut b = Builder::new(n, 6);
    let n = n as i64;
    b.family(n - 1, n, |i| (i, i + 1, i));
    b.family(n - 1, n, |i| (n - 1 + i, i + 1, 2 * n - 1 - i));
    b.family(n - 1, n, |i| (i, i + 3, 2 * n + i));
    b.family(n - 1, n, |i| (n - 1 + i, i + 3, 4 * n - 1 - i));
    // Even values 4n..6n-2, then odd values 4n+1..6n-1.
    b.family(n - 1, n, |i| (i, i + 5, 6 * n - 2 - 2 * i));
    b.family(n - 1, n, |i| (n - 1 + i, i + 5, 4 * n + 1 + 2 * i));
    Ok(b.finish())
}

/// Dispatches to the direct construction of the given width.
pub fn construct(width: usize, n: usize) -> Result<SparseSquare, ConstructionError> {
    match width {
        1 if n == 1 => Ok(construct_trivial()),
        1 => Err(ConstructionError::Precondition {
            width: 1,
            n,
            requirement: "n = 1",
        }),
        3 => construct_k3(n),
        4 => construct_k4(n),
        5 => construct_k5(n),
        6 => construct_k6(n),
        w => Err(ConstructionError::UnsupportedWidth(w)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::square::{diagonal_index, occupied_band, verify};

    fn values_on(s: &SparseSquare, d: usize) -> Vec<i64> {
        let mut v: Vec<_> = s
            .entries()
            .filter(|&(c, _)| diagonal_index(c, s.order()) == d % s.order())
            .map(|(_, v)| v)
            .collect();
        v.sort_unstable();
        v
    }

    fn range(lo: usize, hi: usize) -> Vec<i64> {
        (lo as i64..hi as i64).collect()
    }

    #[test]
    fn trivial() {
        let s = construct_trivial();
        assert_eq!(s.entries().collect::<Vec<_>>(), vec![(Cell::new(0, 0), 0)]);
        let r = verify(&s);
        assert!(r.passed());
        assert_eq!(r.magic_sum, Some(0));
        assert_eq!(occupied_band(&s).unwrap().start, 0);
        assert_eq!(occupied_band(&s).unwrap().width, 1);
    }

    #[test]
    fn k3_order_nine_cells() {
        let s = construct_k3(9).unwrap();
        assert_eq!(s.get(0, 6), Some(4));
        assert_eq!(s.get(0, 7), Some(18));
        assert_eq!(s.get(0, 8), Some(17));
        assert_eq!(s.get(1, 0), Some(12));
        assert_eq!(s.get(1, 7), Some(8));
        assert_eq!(s.get(1, 8), Some(19));
    }

    #[test]
    fn k3_order_three_is_full() {
        // Family tables evaluated by hand for n = 3:
        // D1: (0,0;1) (2,2;0) (1,1;2)   D2: (0,1;6) (1,2;7) (2,0;8)
        // D3: (0,2;5) (2,1;4) (1,0;3)
        let s = construct_k3(3).unwrap();
        let expected = [[1, 6, 5], [3, 2, 7], [8, 4, 0]];
        for (r, row) in expected.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                assert_eq!(s.get(r, c), Some(v), "cell ({r},{c})");
            }
        }
        let rep = verify(&s);
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.magic_sum, Some(12));
    }

    #[test]
    fn k4_order_nine_row_zero() {
        let s = construct_k4(9).unwrap();
        assert_eq!(
            s.row(0),
            vec![
                None,
                Some(0),
                Some(35),
                Some(24),
                Some(11),
                None,
                None,
                None,
                None
            ]
        );
        assert_eq!(s.get(8, 0), Some(8));
    }

    #[test]
    fn k4_order_four() {
        let s = construct_k4(4).unwrap();
        let rep = verify(&s);
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.magic_sum, Some(30));
    }

    #[test]
    fn k5_order_eleven_rows() {
        let s = construct_k5(11).unwrap();
        let row0: Vec<_> = s
            .entries()
            .filter(|(c, _)| c.row == 0)
            .map(|(c, v)| (c.col, v))
            .collect();
        assert_eq!(row0, vec![(1, 0), (2, 15), (3, 32), (4, 42), (5, 46)]);
        let mut last: Vec<_> = s
            .entries()
            .filter(|(c, _)| c.row == 10)
            .map(|(_, v)| v)
            .collect();
        last.sort_unstable();
        assert_eq!(last, vec![10, 21, 22, 37, 45]);
        assert_eq!(last.iter().sum::<i64>(), 135);
    }

    #[test]
    fn k5_order_five() {
        let rep = verify(&construct_k5(5).unwrap());
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.magic_sum, Some(60));
    }

    #[test]
    fn k6_order_ten_rows() {
        let s = construct_k6(10).unwrap();
        let row0: Vec<_> = s
            .entries()
            .filter(|(c, _)| c.row == 0)
            .map(|(c, v)| (c.col, v))
            .collect();
        assert_eq!(
            row0,
            vec![(1, 0), (2, 18), (3, 20), (4, 38), (5, 58), (6, 43)]
        );
        let mut last: Vec<_> = s
            .entries()
            .filter(|(c, _)| c.row == 9)
            .map(|(_, v)| v)
            .collect();
        last.sort_unstable();
        assert_eq!(last, vec![9, 19, 29, 39, 40, 41]);
    }

    #[test]
    fn k6_order_six() {
        let rep = verify(&construct_k6(6).unwrap());
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.magic_sum, Some(105));
    }

    #[test]
    fn preconditions() {
        for n in [0, 1, 2, 4, 6] {
            assert!(construct_k3(n).is_err(), "k3 n={n}");
        }
        for n in [0, 3] {
            assert!(construct_k4(n).is_err());
        }
        for n in [3, 4, 6, 8] {
            assert!(construct_k5(n).is_err());
        }
        assert!(construct_k6(5).is_err());
        assert_eq!(construct(7, 9), Err(ConstructionError::UnsupportedWidth(7)));
        assert!(construct(1, 2).is_err());
    }

    #[test]
    fn diagonal_contents_and_validity_sweep() {
        for n in 3..=41 {
            if n % 2 == 1 {
                let s = construct_k3(n).unwrap();
                assert!(verify(&s).passed(), "k3 n={n}");
                assert_eq!(values_on(&s, n - 3), range(0, n));
                assert_eq!(values_on(&s, n - 2), range(2 * n, 3 * n));
                assert_eq!(values_on(&s, n - 1), range(n, 2 * n));
            }
            if n >= 4 {
                let s = construct_k4(n).unwrap();
                assert!(verify(&s).passed(), "k4 n={n}");
                let expected_start = if n == 4 { 0 } else { 1 };
                assert_eq!(occupied_band(&s).unwrap().start, expected_start);
                assert_eq!(values_on(&s, 1), range(0, n));
                assert_eq!(values_on(&s, 2), range(3 * n, 4 * n));
                assert_eq!(values_on(&s, 3), range(2 * n, 3 * n));
                assert_eq!(values_on(&s, 4), range(n, 2 * n));
            }
            if n >= 5 && n % 2 == 1 {
                let s = construct_k5(n).unwrap();
                assert!(verify(&s).passed(), "k5 n={n}");
                for d in 1..=5 {
                    assert_eq!(
                        values_on(&s, d),
                        range(n * (d - 1), n * d),
                        "k5 n={n} d={d}"
                    );
                }
            }
            if n >= 6 {
                let s = construct_k6(n).unwrap();
                assert!(verify(&s).passed(), "k6 n={n}");
                for d in 1..=4 {
                    assert_eq!(values_on(&s, d), range(n * (d - 1), n * d));
                }
                let evens: Vec<i64> = (4 * n as i64..6 * n as i64).step_by(2).collect();
                let odds: Vec<i64> = (4 * n as i64 + 1..6 * n as i64).step_by(2).collect();
                assert_eq!(values_on(&s, 5), evens);
                assert_eq!(values_on(&s, 6), odds);
            }
        }
    }
}

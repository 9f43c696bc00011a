//! The direct constructions and the 7-diagonal composition against the
//! reference squares of orders 9, 10 and 11 stored under `tests/fixtures`.

use kdiag::compose::{shift, superimpose};
use kdiag::construct::{construct_k3, construct_k4, construct_k5, construct_k6};
use kdiag::document::{from_csv, to_ascii, to_csv};
use kdiag::square::{col_sums, occupied_band, row_sums};
use kdiag::{verify, SparseSquare};

const FIGURES: [(&str, &str, u64); 5] = [
    (
        "figure1",
        include_str!("fixtures/figure1.csv"),
        0x91205fdd4e3b5789,
    ),
    (
        "figure2",
        include_str!("fixtures/figure2.csv"),
        0x0d1a27276108749d,
    ),
    (
        "figure3",
        include_str!("fixtures/figure3.csv"),
        0xce15a27136fe9933,
    ),
    (
        "figure4",
        include_str!("fixtures/figure4.csv"),
        0xd62e43666b00c86d,
    ),
    (
        "figure5",
        include_str!("fixtures/figure5.csv"),
        0x2e2ceeaa02317ed3,
    ),
];

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf29ce484222325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x100000001b3)
    })
}

fn figure(name: &str) -> SparseSquare {
    let (_, text, _) = FIGURES.iter().find(|(n, _, _)| *n == name).unwrap();
    from_csv(text).unwrap()
}

#[test]
fn fixtures_have_not_drifted() {
    for (name, text, sum) in FIGURES {
        assert_eq!(fnv1a(text.as_bytes()), sum, "{name} checksum");
    }
}

#[test]
fn fixtures_are_valid_squares() {
    for (name, expected_sum, start) in [
        ("figure1", 39, 6),
        ("figure2", 70, 1),
        ("figure3", 135, 1),
        ("figure4", 177, 1),
        ("figure5", 217, 6),
    ] {
        let s = figure(name);
        let report = verify(&s);
        assert!(report.passed(), "{name}\n{report}");
        assert_eq!(report.magic_sum, Some(expected_sum), "{name}");
        assert_eq!(occupied_band(&s).unwrap().start, start, "{name}");
    }
}

#[test]
fn constructions_match_fixtures() {
    assert_eq!(construct_k3(9).unwrap(), figure("figure1"));
    assert_eq!(construct_k4(9).unwrap(), figure("figure2"));
    assert_eq!(construct_k5(11).unwrap(), figure("figure3"));
    assert_eq!(construct_k6(10).unwrap(), figure("figure4"));
}

#[test]
fn seven_diagonal_composition_matches_fixture() {
    let k3 = construct_k3(9).unwrap();
    let k4 = shift(&construct_k4(9).unwrap(), 0, 8);
    let s = superimpose(&k3, &k4).unwrap();
    assert_eq!(s, figure("figure5"));
    assert!(row_sums(&s)
        .into_iter()
        .chain(col_sums(&s))
        .all(|x| x == 217));
    // Cell (0,1) of the composed square is the 4-diagonal 35 raised by 27.
    assert_eq!(s.get(0, 1), Some(62));
}

#[test]
fn fixtures_round_trip_through_csv() {
    for (name, text, _) in FIGURES {
        assert_eq!(to_csv(&from_csv(text).unwrap()), text, "{name}");
    }
}

#[test]
fn ascii_blank_layout_matches_reference() {
    let text = to_ascii(&construct_k3(9).unwrap());
    let fixture = figure("figure1");
    for (r, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.trim_matches('|').split('|').collect();
        assert_eq!(fields.len(), 9);
        for (c, field) in fields.iter().enumerate() {
            assert_eq!(field.len(), 2);
            let shown = field.trim().parse::<i64>().ok();
            assert_eq!(shown, fixture.get(r, c), "cell ({r},{c})");
        }
    }
}

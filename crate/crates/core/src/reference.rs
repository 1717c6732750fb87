//! A 5x5 worked instance with rounded reference values, kept as data for regression checks.
//!
//! `B` is given to four decimals, so it is built in symmetrize mode from its
//! upper triangle. `D` rescales it to `B' = D B D^{-1}`, which is printed
//! with rounded entries as well; both the computed and the printed `B'` are
//! available.

use crate::reciprocal::{ReciprocalMatrix, ReciprocityMode};

pub const B_ROWS: [[f64; 5]; 5] = [
    [1.0, 1.0, 1.0, 0.9933, 2.5],
    [1.0, 1.0, 1.0, 0.6666, 1.0],
    [1.0, 1.0, 1.0, 0.6666, 0.5],
    [1.0067, 1.5, 1.5, 1.0, 0.75],
    [0.4, 1.0, 2.0, 1.3333, 1.0],
];

pub const D_DIAG: [f64; 5] = [0.5, 0.5, 0.5, 1.0 / 3.0, 0.25];

/// `D B D^{-1}` as printed (upper triangle; the rest follows by reciprocity).
pub const B_PRIME_ROWS: [[f64; 5]; 5] = [
    [1.0, 1.0, 1.0, 1.49, 5.0],
    [1.0, 1.0, 1.0, 1.0, 2.0],
    [1.0, 1.0, 1.0, 1.0, 1.0],
    [1.0 / 1.49, 1.0, 1.0, 1.0, 1.0],
    [0.2, 0.5, 1.0, 1.0, 1.0],
];

/// Printed Perron vector of `B`, four decimals.
pub const B_PERRON: [f64; 5] = [1.0, 0.7110, 0.6325, 0.8555, 0.8258];

/// Perron vector of the 6x6 extension of `B`.
pub const EXTENSION_PERRON: [f64; 6] = [1.0, 1.0, 1.0, 1.5, 2.0, 0.5];

/// Printed `r_1 - r_5` of `B'`.
pub const B_PRIME_ROW_SUM_GAP: f64 = 5.79;

fn build(rows: &[[f64; 5]; 5]) -> ReciprocalMatrix {
    let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    ReciprocalMatrix::from_rows(&rows, ReciprocityMode::Symmetrize)
        .expect("reference data is positive")
}

pub fn matrix_b() -> ReciprocalMatrix {
    build(&B_ROWS)
}

pub fn printed_b_prime() -> ReciprocalMatrix {
    build(&B_PRIME_ROWS)
}

/// The 3x3 matrix whose digraph with `w = [1, 2, 3]` has a source.
pub fn source_counterexample() -> (ReciprocalMatrix, Vec<f64>) {
    let rows = vec![
        vec![1.0, 1.0, 2.0],
        vec![1.0, 1.0, 1.0],
        vec![0.5, 1.0, 1.0],
    ];
    (
        ReciprocalMatrix::from_rows(&rows, ReciprocityMode::validate())
            .expect("exactly reciprocal"),
        vec![1.0, 2.0, 3.0],
    )
}

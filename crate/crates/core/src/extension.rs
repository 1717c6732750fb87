//! Order-(n+1) extensions of reciprocal matrices.
//!
//! The constant-row-sum extension appends a column `s - r_i` (with `r_i` the
//! row sums) and closes it with the reciprocal row. Every row then sums to
//! `s` as long as `s` solves
//!
//! ```text
//! f(s) = 1 + sum_i 1 / (s - r_i) - s = 0,   s > max_i r_i
//! ```
//!
//! `f` decreases strictly from `+inf` to `-inf` on that interval, so the
//! root is unique, and the all-ones vector is the Perron vector of the
//! extension with eigenvalue `s`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::digraph::{build_digraph, sources, strongly_connected, DEFAULT_EPS_REL};
use crate::error::{Error, Result};
use crate::reciprocal::{
    log_uniform, monomial_similarity, perron, MonomialTransform, PositiveVector, ReciprocalMatrix,
};

/// Absolute bracket width at which bisection stops.
pub const ROOT_TOL: f64 = 1e-13;
/// Relative tie tolerance for weak orderings of weights.
pub const DEFAULT_TIE_TOL: f64 = 1e-8;
/// Log-scale of appended entries in random extensions: entries lie in `[1/9, 9]`.
pub const EXTENSION_LOG_SCALE: f64 = 2.197_224_577_336_219_6; // ln 9

/// `C(i)`: removes row and column `i` (0-based).
pub fn remove_index(c: &ReciprocalMatrix, i: usize) -> Result<ReciprocalMatrix> {
    let n = c.order();
    if n < 3 {
        return Err(Error::TooSmall(n, 3));
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, order: n });
    }
    let keep: Vec<usize> = (0..n).filter(|&k| k != i).collect();
    ReciprocalMatrix::from_upper(n - 1, |r, s| c.get(keep[r], keep[s]))
}

/// Appends a last row and column to `a`: `column[i]` becomes entry `(i, n+1)`.
pub fn extend_with_column(a: &ReciprocalMatrix, column: &[f64]) -> Result<ReciprocalMatrix> {
    let n = a.order();
    if column.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: column.len(),
        });
    }
    ReciprocalMatrix::from_upper(n + 1, |i, j| if j == n { column[i] } else { a.get(i, j) })
}

/// True iff removing the last row and column of `b` gives `a` within `tol` entrywise.
pub fn is_extension(b: &ReciprocalMatrix, a: &ReciprocalMatrix, tol: f64) -> Result<bool> {
    if b.order() != a.order() + 1 {
        return Err(Error::DimensionMismatch {
            expected: a.order() + 1,
            found: b.order(),
        });
    }
    let n = a.order();
    Ok((0..n).all(|i| (0..n).all(|j| (b.get(i, j) - a.get(i, j)).abs() <= tol)))
}

/// `r_1 - r_n > 1`.
pub fn well_behaved_type_i(a: &ReciprocalMatrix) -> bool {
    row_sum_gap(a) > 1.0
}

/// `r_1 - r_n`.
pub fn row_sum_gap(a: &ReciprocalMatrix) -> f64 {
    let sums = a.row_sums();
    sums[0] - sums[sums.len() - 1]
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionResult {
    pub matrix: ReciprocalMatrix,
    /// Common row sum `s`, also the Perron eigenvalue.
    pub target_sum: f64,
    pub appended_column: Vec<f64>,
    /// `max_i |(B e)_i - s|`.
    pub perron_check: f64,
}

pub fn constant_row_sum_extension(a: &ReciprocalMatrix) -> Result<ExtensionResult> {
    let sums = a.row_sums();
    let s = solve_common_sum(&sums)?;
    let appended_column: Vec<f64> = sums.iter().map(|r| s - r).collect();
    let matrix = extend_with_column(a, &appended_column)?;
    let perron_check = matrix
        .row_sums()
        .iter()
        .map(|t| (t - s).abs())
        .fold(0.0, f64::max);
    Ok(ExtensionResult {
        matrix,
        target_sum: s,
        appended_column,
        perron_check,
    })
}

fn common_sum_equation(sums: &[f64], s: f64) -> f64 {
    1.0 + sums.iter().map(|r| 1.0 / (s - r)).sum::<f64>() - s
}

/// Bisection for the root of `f` on `(max r_i, inf)`.
fn solve_common_sum(sums: &[f64]) -> Result<f64> {
    let f = |s: f64| common_sum_equation(sums, s);
    let top = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut lo = top + 1e-9;
    let mut hi = top + sums.len() as f64 + 1.0;
    let (mut f_lo, mut f_hi) = (f(lo), f(hi));
    if f_lo.is_nan() || f_lo <= 0.0 {
        return Err(Error::RootFinding(format!(
            "f({lo}) = {f_lo} is not positive"
        )));
    }
    let mut doublings = 0;
    while f_hi > 0.0 {
        doublings += 1;
        if doublings > 200 {
            return Err(Error::RootFinding("could not bracket the root".into()));
        }
        let width = hi - top;
        lo = hi;
        f_lo = f_hi;
        hi = top + 2.0 * width;
        f_hi = f(hi);
    }
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if !(f_mid <= f_lo && f_mid >= f_hi) {
            return Err(Error::RootFinding(format!(
                "f is not monotone on [{lo}, {hi}]: f(mid) = {f_mid}"
            )));
        }
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid > 0.0 {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}

/// The extension built by conjugating into a diagonal frame, extending with
/// constant row sums there, and conjugating back.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugatedExtension {
    pub matrix: ReciprocalMatrix,
    /// `D A D^{-1}`.
    pub conjugated: ReciprocalMatrix,
    /// Constant-row-sum extension of [`ConjugatedExtension::conjugated`].
    pub inner: ExtensionResult,
    /// `(D^{-1} (+) [1]) e`, normalized to first component 1.
    pub perron_vector: PositiveVector,
}

/// Extends `a` to `(D^{-1} (+) [1]) B' (D (+) [1])`, where `B'` is the
/// constant-row-sum extension of `D a D^{-1}`. The leading block is copied
/// from `a` unchanged, so the result is an exact extension of `a`.
pub fn conjugated_extension(a: &ReciprocalMatrix, diag: &[f64]) -> Result<ConjugatedExtension> {
    let n = a.order();
    if diag.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: diag.len(),
        });
    }
    let d = MonomialTransform::diagonal(diag.to_vec())?;
    let conjugated = monomial_similarity(a, &d)?;
    let inner = constant_row_sum_extension(&conjugated)?;
    let column: Vec<f64> = inner
        .appended_column
        .iter()
        .zip(diag)
        .map(|(b, d)| b / d)
        .collect();
    let matrix = extend_with_column(a, &column)?;
    let mut image: Vec<f64> = diag.iter().map(|d| 1.0 / d).collect();
    image.push(1.0);
    let perron_vector = PositiveVector::new(image)?.normalized_first();
    Ok(ConjugatedExtension {
        matrix,
        conjugated,
        inner,
        perron_vector,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SourceScan {
    pub samples: usize,
    /// Sample indices whose Perron digraph has a source.
    pub violations: Vec<usize>,
    pub inefficient: usize,
}

/// Seed of sample `k` in a scan started from `seed`.
pub fn sample_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64)
        .wrapping_add(1)
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Random extensions of `a` with appended entries log-uniform in `[1/9, 9]`;
/// records every extension whose Perron digraph has a source.
pub fn extension_source_scan(
    a: &ReciprocalMatrix,
    samples: usize,
    seed: u64,
) -> Result<SourceScan> {
    if samples == 0 {
        return Err(Error::InvalidParams("samples must be at least 1".into()));
    }
    let mut violations = Vec::new();
    let mut inefficient = 0;
    for k in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, k));
        let column: Vec<f64> = (0..a.order())
            .map(|_| log_uniform(&mut rng, EXTENSION_LOG_SCALE))
            .collect();
        let b = extend_with_column(a, &column)?;
        let w = perron(&b)?.vector;
        let g = build_digraph(&b, &w, DEFAULT_EPS_REL)?;
        if !sources(&g).is_empty() {
            violations.push(k);
        }
        if !strongly_connected(&g).is_strongly_connected() {
            inefficient += 1;
        }
    }
    Ok(SourceScan {
        samples,
        violations,
        inefficient,
    })
}

/// Dense descending ranks; values within `tie_tol * max` of a group's
/// leading value share its rank.
pub fn weak_order_ranks(values: &[f64], tie_tol: f64) -> Vec<usize> {
    let scale = values.iter().copied().fold(0.0, f64::max);
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let mut ranks = vec![0; values.len()];
    let mut rank = 0;
    let mut leader = f64::NAN;
    for (pos, &i) in idx.iter().enumerate() {
        if pos > 0 && (leader - values[i]).abs() > tie_tol * scale {
            rank += 1;
            leader = values[i];
        } else if pos == 0 {
            leader = values[i];
        }
        ranks[i] = rank;
    }
    ranks
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderPreservation {
    pub preserved: bool,
    pub rank_base: Vec<usize>,
    pub rank_extension_prefix: Vec<usize>,
}

/// Compares the weak ordering of the Perron weights of `a` with that of the
/// first `n` Perron weights of its extension `b`.
pub fn order_preservation_check(
    a: &ReciprocalMatrix,
    b: &ReciprocalMatrix,
    tie_tol: f64,
) -> Result<OrderPreservation> {
    if !is_extension(b, a, 0.0)? {
        return Err(Error::InvalidParams(
            "second matrix is not an extension of the first".into(),
        ));
    }
    let wa = perron(a)?.vector;
    let wb = perron(b)?.vector;
    let rank_base = weak_order_ranks(wa.as_slice(), tie_tol);
    let rank_extension_prefix = weak_order_ranks(&wb.as_slice()[..a.order()], tie_tol);
    Ok(OrderPreservation {
        preserved: rank_base == rank_extension_prefix,
        rank_base,
        rank_extension_prefix,
    })
}

/// JSON body emitted for an extension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionReport {
    pub base_order: usize,
    pub target_sum: f64,
    pub appended_column: Vec<f64>,
    pub perron_vector: Vec<f64>,
    pub efficient: bool,
    pub order_preserved: bool,
}

impl ExtensionReport {
    /// Evaluates `b`, an extension of `a`, with target sum `s` recorded verbatim.
    pub fn evaluate(a: &ReciprocalMatrix, b: &ReciprocalMatrix, target_sum: f64) -> Result<Self> {
        let n = a.order();
        let pair = perron(b)?;
        let g = build_digraph(b, &pair.vector, DEFAULT_EPS_REL)?;
        let order = order_preservation_check(a, b, DEFAULT_TIE_TOL)?;
        Ok(Self {
            base_order: n,
            target_sum,
            appended_column: (0..n).map(|i| b.get(i, n)).collect(),
            perron_vector: pair.vector.into_vec(),
            efficient: strongly_connected(&g).is_strongly_connected(),
            order_preserved: order.preserved,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reciprocal::{consistent_from_vector, random_reciprocal};
    use crate::zfamily::{z_matrix, ZParams};

    #[test]
    fn remove_last_of_ones() {
        let r = remove_index(&ReciprocalMatrix::ones(4).unwrap(), 3).unwrap();
        assert_eq!(r, ReciprocalMatrix::ones(3).unwrap());
        assert!(remove_index(&ReciprocalMatrix::ones(4).unwrap(), 4).is_err());
        assert!(remove_index(&ReciprocalMatrix::ones(2).unwrap(), 0).is_err());
    }

    #[test]
    fn removing_middle_row_of_z5_gives_z4() {
        let p5 = ZParams::new(5, 2.0, 3.0, 0.5, 1.5).unwrap();
        let p4 = ZParams::new(4, 2.0, 3.0, 0.5, 1.5).unwrap();
        assert_eq!(remove_index(&z_matrix(&p5), 2).unwrap(), z_matrix(&p4));
    }

    #[test]
    fn remove_then_extend_restores() {
        let c = random_reciprocal(5, 11, 1.5).unwrap();
        let a = remove_index(&c, 4).unwrap();
        let col: Vec<f64> = (0..4).map(|i| c.get(i, 4)).collect();
        assert_eq!(extend_with_column(&a, &col).unwrap(), c);
    }

    #[test]
    fn is_extension_checks_order() {
        let a = ReciprocalMatrix::ones(3).unwrap();
        assert!(is_extension(&ReciprocalMatrix::ones(4).unwrap(), &a, 0.0).unwrap());
        assert!(is_extension(&ReciprocalMatrix::ones(5).unwrap(), &a, 0.0).is_err());
    }

    #[test]
    fn well_behaved_definition() {
        assert!(!well_behaved_type_i(&ReciprocalMatrix::ones(4).unwrap()));
        let v = PositiveVector::new(vec![4.0, 2.0, 1.0, 0.5]).unwrap();
        let c = consistent_from_vector(&v).unwrap();
        let sums = c.row_sums();
        assert_eq!(well_behaved_type_i(&c), sums[0] - sums[3] > 1.0);
        assert!((row_sum_gap(&c) - 3.5 * 3.75).abs() < 1e-12);
    }

    #[test]
    fn ones_extend_to_ones() {
        for n in 2..7 {
            let ext = constant_row_sum_extension(&ReciprocalMatrix::ones(n).unwrap()).unwrap();
            assert!((ext.target_sum - (n as f64 + 1.0)).abs() < 1e-12);
            assert!(ext.appended_column.iter().all(|c| (c - 1.0).abs() < 1e-12));
            assert!(ext.perron_check < 1e-10);
        }
    }

    #[test]
    fn random_extension_has_constant_row_sums() {
        let a = random_reciprocal(4, 5, 2.0).unwrap();
        let ext = constant_row_sum_extension(&a).unwrap();
        assert!(ext.perron_check < 1e-10 * ext.target_sum);
        assert!(is_extension(&ext.matrix, &a, 0.0).unwrap());
        let w = perron(&ext.matrix).unwrap().vector;
        assert!(w.as_slice().iter().all(|v| (v - 1.0).abs() < 1e-8));
        let max_r = a.row_sums().into_iter().fold(0.0, f64::max);
        assert!(ext.target_sum > max_r);
    }

    #[test]
    fn bracket_widens_for_large_sums() {
        let a = random_reciprocal(6, 2, 9f64.ln() * 3.0).unwrap();
        let ext = constant_row_sum_extension(&a).unwrap();
        assert!(ext.perron_check < 1e-10 * ext.target_sum);
    }

    #[test]
    fn identity_conjugation_matches_plain_extension() {
        let a = random_reciprocal(4, 9, 1.0).unwrap();
        let plain = constant_row_sum_extension(&a).unwrap();
        let conj = conjugated_extension(&a, &[1.0; 4]).unwrap();
        assert_eq!(conj.matrix, plain.matrix);
        assert!(conj.perron_vector.as_slice().iter().all(|&v| v == 1.0));
        assert!(conjugated_extension(&a, &[1.0; 3]).is_err());
    }

    #[test]
    fn ranks_collapse_ties() {
        assert_eq!(
            weak_order_ranks(&[1.0, 1.0, 1.0, 1.5, 2.0], 1e-8),
            vec![2, 2, 2, 1, 0]
        );
        assert_eq!(
            weak_order_ranks(&[1.0, 0.7110, 0.6325, 0.8555, 0.8258], 1e-8),
            vec![0, 3, 4, 1, 2]
        );
    }

    #[test]
    fn ones_extension_preserves_order() {
        let a = ReciprocalMatrix::ones(3).unwrap();
        let b = ReciprocalMatrix::ones(4).unwrap();
        assert!(
            order_preservation_check(&a, &b, DEFAULT_TIE_TOL)
                .unwrap()
                .preserved
        );
    }

    #[test]
    fn scan_of_ones_has_no_sources() {
        let scan = extension_source_scan(&ReciprocalMatrix::ones(3).unwrap(), 100, 1).unwrap();
        assert_eq!(scan.samples, 100);
        assert!(scan.violations.is_empty());
        assert!(extension_source_scan(&ReciprocalMatrix::ones(3).unwrap(), 0, 1).is_err());
    }

    #[test]
    fn log_scale_constant_is_ln9() {
        assert!((EXTENSION_LOG_SCALE - 9f64.ln()).abs() < 1e-15);
    }
}

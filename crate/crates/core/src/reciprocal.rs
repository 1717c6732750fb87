//! Reciprocal (pairwise comparison) matrices and their Perron eigenpairs.
//!
//! A [`ReciprocalMatrix`] is stored canonically: the upper triangle is the
//! source of truth and every lower entry is written as the reciprocal of its
//! mirror, so `a_ij * a_ji == 1` holds bit-for-bit up to the rounding of a
//! single division. Edge decisions in the efficiency digraph compare
//! `w_i / w_j` against both `a_ij` and `a_ji`, and rely on that.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance on `a_ij * a_ji - 1` used by [`ReciprocityMode::Validate`] by default.
pub const DEFAULT_RECIPROCITY_TOL: f64 = 1e-12;
/// Power iteration stopping tolerance (max-norm of successive normalized iterates).
pub const DEFAULT_PERRON_TOL: f64 = 1e-14;
pub const DEFAULT_PERRON_MAX_ITER: usize = 100_000;

/// A vector with strictly positive, finite entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PositiveVector(Vec<f64>);

impl PositiveVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooSmall(0, 1));
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::NonPositive {
                    row: i,
                    col: 0,
                    value: v,
                });
            }
        }
        Ok(Self(values))
    }

    /// The all-ones vector `e_n`.
    pub fn ones(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Rescales so the first component is exactly 1.
    pub fn normalized_first(&self) -> Self {
        let head = self.0[0];
        let mut out: Vec<f64> = self.0.iter().map(|v| v / head).collect();
        out[0] = 1.0;
        Self(out)
    }

    /// True if `self` is a positive multiple of `other` within relative tolerance `tol`.
    pub fn is_multiple_of(&self, other: &PositiveVector, tol: f64) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let a = self.normalized_first();
        let b = other.normalized_first();
        a.0.iter()
            .zip(&b.0)
            .all(|(x, y)| (x - y).abs() <= tol * x.abs().max(y.abs()))
    }
}

impl TryFrom<Vec<f64>> for PositiveVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<PositiveVector> for Vec<f64> {
    fn from(v: PositiveVector) -> Self {
        v.0
    }
}

impl std::ops::Index<usize> for PositiveVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// How [`ReciprocalMatrix::from_rows`] treats the lower triangle and diagonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReciprocityMode {
    /// Reject the input unless the diagonal is exactly 1 and every pair
    /// satisfies `|a_ij * a_ji - 1| <= tol`. Accepted input is then
    /// canonicalized from its upper triangle.
    Validate { tol: f64 },
    /// Keep the upper triangle, overwrite the diagonal with 1 and the lower
    /// triangle with reciprocals.
    Symmetrize,
}

impl ReciprocityMode {
    pub fn validate() -> Self {
        ReciprocityMode::Validate {
            tol: DEFAULT_RECIPROCITY_TOL,
        }
    }
}

/// A positive `n x n` matrix with unit diagonal and `a_ji = 1 / a_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReciprocalMatrix {
    n: usize,
    data: Vec<f64>,
}

impl ReciprocalMatrix {
    /// Builds a reciprocal matrix from row-major rows.
    pub fn from_rows(rows: &[Vec<f64>], mode: ReciprocityMode) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::TooSmall(n, 2));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i,
                    found: row.len(),
                    expected: n,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::NonPositive {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        if let ReciprocityMode::Validate { tol } = mode {
            for (i, row) in rows.iter().enumerate() {
                if row[i] != 1.0 {
                    return Err(Error::Diagonal(i, row[i]));
                }
                for j in (i + 1)..n {
                    let product = row[j] * rows[j][i];
                    if (product - 1.0).abs() > tol {
                        return Err(Error::Reciprocity {
                            row: i,
                            col: j,
                            product,
                        });
                    }
                }
            }
        }
        Self::from_upper(n, |i, j| rows[i][j])
    }

    /// Builds a matrix from a generator of upper-triangle entries `(i, j)`, `i < j`.
    pub fn from_upper(n: usize, mut upper: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall(n, 2));
        }
        let mut data = vec![1.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = upper(i, j);
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::NonPositive {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                data[i * n + j] = v;
                data[j * n + i] = 1.0 / v;
            }
        }
        Ok(Self { n, data })
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::from_upper(n, |_, _| 1.0)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entrywise absolute difference; `None` if orders differ.
    pub fn max_abs_diff(&self, other: &ReciprocalMatrix) -> Option<f64> {
        (self.n == other.n).then(|| {
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }
}

/// The consistent matrix `v v^{-1}`, with entries `v_i / v_j`.
pub fn consistent_from_vector(v: &PositiveVector) -> Result<ReciprocalMatrix> {
    let s = v.as_slice();
    ReciprocalMatrix::from_upper(s.len(), |i, j| s[i] / s[j])
}

/// True iff `|a_ij a_jk - a_ik| <= tol * a_ik` for every triple.
pub fn is_consistent(a: &ReciprocalMatrix, tol: f64) -> bool {
    let n = a.order();
    (0..n).all(|i| {
        (0..n).all(|j| {
            (0..n).all(|k| {
                let aik = a.get(i, k);
                (a.get(i, j) * a.get(j, k) - aik).abs() <= tol * aik
            })
        })
    })
}

/// Perron eigenvalue and eigenvector (first component 1).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerronPair {
    pub value: f64,
    pub vector: PositiveVector,
    /// `max_i |(A w)_i - r w_i|`.
    pub residual: f64,
    pub iterations: usize,
}

pub fn perron(a: &ReciprocalMatrix) -> Result<PerronPair> {
    perron_with(a, DEFAULT_PERRON_TOL, DEFAULT_PERRON_MAX_ITER)
}

/// Power iteration from the all-ones vector, renormalizing to `w_1 = 1`
/// every step. Stops once successive iterates differ by less than
/// `tol * max(1, |w|_inf)` in the max norm.
pub fn perron_with(a: &ReciprocalMatrix, tol: f64, max_iter: usize) -> Result<PerronPair> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = a.order();
    let mut w = vec![1.0; n];
    for iter in 1..=max_iter {
        let mut next = a.mul_vec(&w);
        let head = next[0];
        next.iter_mut().for_each(|v| *v /= head);
        next[0] = 1.0;
        let scale = next.iter().copied().fold(1.0, f64::max);
        let delta = next
            .iter()
            .zip(&w)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        w = next;
        if delta < tol * scale {
            return Ok(finish(a, w, iter));
        }
    }
    let pair = finish(a, w, max_iter);
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: pair.residual,
    })
}

fn finish(a: &ReciprocalMatrix, w: Vec<f64>, iterations: usize) -> PerronPair {
    let aw = a.mul_vec(&w);
    let value = aw[0] / w[0];
    let residual = aw
        .iter()
        .zip(&w)
        .map(|(x, y)| (x - value * y).abs())
        .fold(0.0, f64::max);
    PerronPair {
        value,
        vector: PositiveVector(w),
        residual,
        iterations,
    }
}

/// `Q = D P`: a positive diagonal times a permutation matrix.
///
/// `P` sends basis vector `e_j` to `e_{perm[j]}`, so `(Q w)_{perm[j]} =
/// diag[perm[j]] * w_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialTransform {
    perm: Vec<usize>,
    diag: Vec<f64>,
}

impl MonomialTransform {
    pub fn new(perm: Vec<usize>, diag: Vec<f64>) -> Result<Self> {
        let n = perm.len();
        if diag.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: diag.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidParams(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen[p] = true;
        }
        for (i, &d) in diag.iter().enumerate() {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::NonPositive {
                    row: i,
                    col: i,
                    value: d,
                });
            }
        }
        Ok(Self { perm, diag })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            diag: vec![1.0; n],
        }
    }

    pub fn diagonal(diag: Vec<f64>) -> Result<Self> {
        Self::new((0..diag.len()).collect(), diag)
    }

    pub fn permutation(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        Self::new(perm, vec![1.0; n])
    }

    pub fn order(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// `Q w`.
    pub fn apply(&self, w: &PositiveVector) -> Result<PositiveVector> {
        if w.len() != self.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                found: w.len(),
            });
        }
        let mut out = vec![0.0; w.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            out[p] = self.diag[p] * w[j];
        }
        PositiveVector::new(out)
    }
}

/// `Q A Q^{-1}`, entry `(perm[i], perm[j])` equal to `d[perm[i]] a_ij / d[perm[j]]`.
pub fn monomial_similarity(
    a: &ReciprocalMatrix,
    q: &MonomialTransform,
) -> Result<ReciprocalMatrix> {
    let n = a.order();
    if q.order() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: q.order(),
        });
    }
    let mut inv = vec![0; n];
    for (j, &p) in q.perm.iter().enumerate() {
        inv[p] = j;
    }
    ReciprocalMatrix::from_upper(n, |i, j| q.diag[i] * a.get(inv[i], inv[j]) / q.diag[j])
}

/// Absolute slack used when comparing deviations `|a_ij - w_i / w_j|`.
fn deviation_slack(a_ij: f64) -> f64 {
    1e-12 * (1.0 + a_ij)
}

/// True iff `w2` Pareto-dominates `w`: no entry deviation `|a_ij - w2_i/w2_j|`
/// exceeds the corresponding deviation for `w`, and at least one is strictly
/// smaller. Comparisons carry a slack of `1e-12 * (1 + a_ij)`, which keeps the
/// relation irreflexive and asymmetric under rounding.
pub fn pareto_dominates(a: &ReciprocalMatrix, w: &PositiveVector, w2: &PositiveVector) -> bool {
    let n = a.order();
    if w.len() != n || w2.len() != n {
        return false;
    }
    let mut strict = false;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let aij = a.get(i, j);
            let old = (aij - w[i] / w[j]).abs();
            let new = (aij - w2[i] / w2[j]).abs();
            let slack = deviation_slack(aij);
            if new > old + slack {
                return false;
            }
            if old - new > slack {
                strict = true;
            }
        }
    }
    strict
}

/// Random reciprocal matrix with upper entries `exp(u)`, `u ~ U[-log_scale, log_scale]`.
pub fn random_reciprocal(n: usize, seed: u64, log_scale: f64) -> Result<ReciprocalMatrix> {
    if !(log_scale >= 0.0 && log_scale.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "log_scale must be >= 0, got {log_scale}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ReciprocalMatrix::from_upper(n, |_, _| log_uniform(&mut rng, log_scale))
}

pub(crate) fn log_uniform<R: Rng>(rng: &mut R, log_scale: f64) -> f64 {
    if log_scale == 0.0 {
        1.0
    } else {
        rng.gen_range(-log_scale..=log_scale).exp()
    }
}

/// Random positive vector with entries `exp(u)`, `u ~ U[-log_scale, log_scale]`.
pub fn random_positive_vector(n: usize, seed: u64, log_scale: f64) -> PositiveVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PositiveVector((0..n).map(|_| log_uniform(&mut rng, log_scale)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example_b() -> ReciprocalMatrix {
        let rows = vec![
            vec![1.0, 1.0, 1.0, 0.9933, 2.5],
            vec![1.0, 1.0, 1.0, 0.6666, 1.0],
            vec![1.0, 1.0, 1.0, 0.6666, 0.5],
            vec![1.0067, 1.5, 1.5, 1.0, 0.75],
            vec![0.4, 1.0, 2.0, 1.3333, 1.0],
        ];
        ReciprocalMatrix::from_rows(&rows, ReciprocityMode::Symmetrize).unwrap()
    }

    #[test]
    fn ones_is_consistent() {
        let a = ReciprocalMatrix::from_rows(&vec![vec![1.0; 3]; 3], ReciprocityMode::validate())
            .unwrap();
        assert!(is_consistent(&a, 1e-12));
    }

    #[test]
    fn rounded_example_needs_symmetrize_or_relaxed_tolerance() {
        let rows = vec![
            vec![1.0, 1.0, 1.0, 0.9933, 2.5],
            vec![1.0, 1.0, 1.0, 0.6666, 1.0],
            vec![1.0, 1.0, 1.0, 0.6666, 0.5],
            vec![1.0067, 1.5, 1.5, 1.0, 0.75],
            vec![0.4, 1.0, 2.0, 1.3333, 1.0],
        ];
        assert!(matches!(
            ReciprocalMatrix::from_rows(&rows, ReciprocityMode::validate()),
            Err(Error::Reciprocity { .. })
        ));
        let relaxed =
            ReciprocalMatrix::from_rows(&rows, ReciprocityMode::Validate { tol: 1e-3 }).unwrap();
        let sym = ReciprocalMatrix::from_rows(&rows, ReciprocityMode::Symmetrize).unwrap();
        assert_eq!(relaxed, sym);
        assert_eq!(sym.get(3, 0), 1.0 / 0.9933);
    }

    #[test]
    fn reciprocity_violation_rejected() {
        let rows = vec![vec![1.0, 2.0], vec![3.0, 1.0]];
        let err = ReciprocalMatrix::from_rows(&rows, ReciprocityMode::validate()).unwrap_err();
        assert!(matches!(err, Error::Reciprocity { row: 0, col: 1, .. }));
    }

    #[test]
    fn malformed_inputs_rejected() {
        let ragged = vec![vec![1.0, 2.0], vec![0.5]];
        assert!(matches!(
            ReciprocalMatrix::from_rows(&ragged, ReciprocityMode::Symmetrize),
            Err(Error::NotSquare { row: 1, .. })
        ));
        let negative = vec![vec![1.0, -2.0], vec![-0.5, 1.0]];
        assert!(matches!(
            ReciprocalMatrix::from_rows(&negative, ReciprocityMode::Symmetrize),
            Err(Error::NonPositive { row: 0, col: 1, .. })
        ));
        let diag = vec![vec![2.0, 2.0], vec![0.5, 1.0]];
        assert!(matches!(
            ReciprocalMatrix::from_rows(&diag, ReciprocityMode::validate()),
            Err(Error::Diagonal(0, _))
        ));
    }

    #[test]
    fn consistent_from_vector_entries() {
        let a = consistent_from_vector(&PositiveVector::new(vec![1.0, 2.0, 4.0]).unwrap()).unwrap();
        assert_eq!(a.get(0, 2), 0.25);
        assert_eq!(a.get(2, 0), 4.0);
        let ones = consistent_from_vector(&PositiveVector::ones(3)).unwrap();
        assert_eq!(ones, ReciprocalMatrix::ones(3).unwrap());
        assert!(is_consistent(
            &consistent_from_vector(&PositiveVector::new(vec![1.0, 3.0, 9.0]).unwrap()).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn consistent_from_vector_passes_every_triple() {
        let v = PositiveVector::new(vec![2.0, 2.0, 2.0, 3.0, 4.0]).unwrap();
        let a = consistent_from_vector(&v).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    let lhs = a.get(i, j) * a.get(j, k);
                    assert!((lhs - a.get(i, k)).abs() <= 1e-15 * a.get(i, k));
                }
            }
        }
    }

    #[test]
    fn perron_of_ones() {
        for n in 2..7 {
            let p = perron(&ReciprocalMatrix::ones(n).unwrap()).unwrap();
            assert!((p.value - n as f64).abs() < 1e-12);
            assert!(p.vector.as_slice().iter().all(|&v| v == 1.0));
        }
    }

    #[test]
    fn perron_of_example_b() {
        let p = perron(&example_b()).unwrap();
        let expected = [1.0, 0.7110, 0.6325, 0.8555, 0.8258];
        for (got, want) in p.vector.as_slice().iter().zip(expected) {
            assert!((got - want).abs() <= 5e-4, "{got} vs {want}");
        }
        assert!(p.value >= 5.0);
        assert!(p.residual <= 1e-10 * p.value);
    }

    #[test]
    fn perron_rejects_bad_tolerance() {
        let a = ReciprocalMatrix::ones(3).unwrap();
        assert!(perron_with(&a, 0.0, 10).is_err());
    }

    #[test]
    fn perron_reports_non_convergence() {
        let a = random_reciprocal(6, 3, 2.0).unwrap();
        match perron_with(&a, 1e-300, 3) {
            Err(Error::NoConvergence { iterations: 3, .. }) => {}
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn identity_similarity_is_noop() {
        let b = example_b();
        assert_eq!(
            monomial_similarity(&b, &MonomialTransform::identity(5)).unwrap(),
            b
        );
        assert!(monomial_similarity(&b, &MonomialTransform::identity(4)).is_err());
    }

    #[test]
    fn diagonal_similarity_reproduces_printed_b_prime() {
        let d = MonomialTransform::diagonal(vec![0.5, 0.5, 0.5, 1.0 / 3.0, 0.25]).unwrap();
        let bp = monomial_similarity(&example_b(), &d).unwrap();
        let printed = [
            [1.0, 1.0, 1.0, 1.49, 5.0],
            [1.0, 1.0, 1.0, 1.0, 2.0],
            [1.0, 1.0, 1.0, 1.0, 1.0],
            [1.0 / 1.49, 1.0, 1.0, 1.0, 1.0],
            [0.2, 0.5, 1.0, 1.0, 1.0],
        ];
        for i in 0..5 {
            for j in 0..5 {
                assert!((bp.get(i, j) - printed[i][j]).abs() <= 1e-3, "({i},{j})");
            }
        }
    }

    #[test]
    fn transform_validation() {
        assert!(MonomialTransform::new(vec![0, 0], vec![1.0, 1.0]).is_err());
        assert!(MonomialTransform::new(vec![1, 0], vec![1.0, 0.0]).is_err());
        assert!(MonomialTransform::new(vec![1, 0], vec![1.0]).is_err());
        let q = MonomialTransform::new(vec![1, 2, 0], vec![2.0, 3.0, 5.0]).unwrap();
        let w = PositiveVector::new(vec![1.0, 10.0, 100.0]).unwrap();
        // e_0 -> e_1, e_1 -> e_2, e_2 -> e_0
        assert_eq!(q.apply(&w).unwrap().as_slice(), &[200.0, 3.0, 50.0]);
    }

    #[test]
    fn pareto_edge_cases() {
        let b = example_b();
        let w = perron(&b).unwrap().vector;
        assert!(!pareto_dominates(&b, &w, &w));

        let v = PositiveVector::new(vec![1.0, 2.0, 5.0]).unwrap();
        let c = consistent_from_vector(&v).unwrap();
        let other = PositiveVector::new(vec![1.0, 2.5, 5.0]).unwrap();
        assert!(!pareto_dominates(&c, &v, &other));
        assert!(pareto_dominates(&c, &other, &v));
        let scaled = PositiveVector::new(vec![3.0, 6.0, 15.0]).unwrap();
        assert!(!pareto_dominates(&c, &v, &scaled));
    }

    #[test]
    fn random_reciprocal_is_deterministic_and_bounded() {
        assert_eq!(
            random_reciprocal(3, 7, 1.0).unwrap(),
            random_reciprocal(3, 7, 1.0).unwrap()
        );
        assert_ne!(
            random_reciprocal(3, 7, 1.0).unwrap(),
            random_reciprocal(3, 8, 1.0).unwrap()
        );
        assert_eq!(
            random_reciprocal(4, 1, 0.0).unwrap(),
            ReciprocalMatrix::ones(4).unwrap()
        );
        let a = random_reciprocal(5, 1, 4f64.ln()).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let v = a.get(i, j);
                assert!((0.25 - 1e-12..=4.0 + 1e-12).contains(&v));
                assert_eq!(a.get(j, i), 1.0 / v);
            }
            assert_eq!(a.get(i, i), 1.0);
        }
        assert!(random_reciprocal(3, 1, -1.0).is_err());
    }
}

//! Eigen-equation identities for `Z_n` and the edges they force.

use serde::Serialize;

use super::{z_matrix, ZParams};
use crate::digraph::EfficiencyDigraph;
use crate::error::Result;
use crate::reciprocal::perron;

/// Residuals of the row equations of `(Z - rI) w = 0` and of the ten
/// pairwise differences derived from them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResiduals {
    pub perron_value: f64,
    /// `|row residual|` for row 1, row 2, the middle rows (max), row `n-1` and row `n`.
    pub rows: [f64; 5],
    /// Absolute value of each derived identity, in order:
    /// 1-2, 1-3, 1-y·(n-1), 1-x·n, 2-3, 2-a·(n-1), 2-z·n, 3-(n-1), 3-n, (n-1)-n.
    pub derived: [f64; 10],
    /// `max |w_j - w_3|` over `4 <= j <= n-2` (zero when `n = 5`).
    pub middle_spread: f64,
    pub w3: f64,
}

impl IdentityResiduals {
    pub fn max_row(&self) -> f64 {
        self.rows.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_derived(&self) -> f64 {
        self.derived.iter().copied().fold(0.0, f64::max)
    }
}

pub fn eigen_identity_residuals(p: &ZParams) -> Result<IdentityResiduals> {
    p.require_n5()?;
    let n = p.n;
    let m = z_matrix(p);
    let pair = perron(&m)?;
    let r = pair.value;
    let w = pair.vector.as_slice();
    let (x, y, z, a) = (p.x, p.y, p.z, p.a);

    let aw = m.mul_vec(w);
    let row = |i: usize| (aw[i] - r * w[i]).abs();
    let middle = (2..n - 2).map(row).fold(0.0, f64::max);
    let rows = [row(0), row(1), middle, row(n - 2), row(n - 1)];

    let (w1, w2, w3, wp, wl) = (w[0], w[1], w[2], w[n - 2], w[n - 1]);
    let k = (n - 4) as f64;
    let derived = [
        r * (w2 - w1) + (y - a) * wp + (x - z) * wl,
        r * (w3 - w1) + (y - 1.0) * wp + (x - 1.0) * wl,
        r * (y * wp - w1) + (1.0 - y / a) * w2 + (1.0 - y) * k * w3 + (x - y) * wl,
        r * (x * wl - w1) + (1.0 - x / z) * w2 + (1.0 - x) * k * w3 + (y - x) * wp,
        r * (w3 - w2) + (a - 1.0) * wp + (z - 1.0) * wl,
        r * (a * wp - w2) + (1.0 - a / y) * w1 + (1.0 - a) * k * w3 + (z - a) * wl,
        r * (z * wl - w2) + (1.0 - z / x) * w1 + (1.0 - z) * k * w3 + (a - z) * wp,
        r * (wp - w3) + (1.0 - 1.0 / y) * w1 + (1.0 - 1.0 / a) * w2,
        r * (wl - w3) + (1.0 - 1.0 / x) * w1 + (1.0 - 1.0 / z) * w2,
        r * (wl - wp) + (1.0 / y - 1.0 / x) * w1 + (1.0 / a - 1.0 / z) * w2,
    ]
    .map(f64::abs);

    let middle_spread = (3..n - 2).map(|j| (w[j] - w3).abs()).fold(0.0, f64::max);
    Ok(IdentityResiduals {
        perron_value: r,
        rows,
        derived,
        middle_spread,
        w3,
    })
}

/// An edge guaranteed by a sign argument on one derived identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedEdge {
    /// `"out.k"` for edges leaving the perturbed pair, `"in.k"` for the reverse family.
    pub clause: &'static str,
    pub from: usize,
    pub to: usize,
}

/// All edges of `G_{Z,w}` implied by the parameter order alone (`n >= 5`).
pub fn predicted_edges(p: &ZParams) -> Result<Vec<PredictedEdge>> {
    p.require_n5()?;
    let n = p.n;
    let (x, y, z, a) = (p.x, p.y, p.z, p.a);
    let (v1, v2, vp, vl) = (0, 1, n - 2, n - 1);
    let middle = 2..n - 2;
    let mut out = Vec::new();
    let mut push = |cond: bool, clause: &'static str, pairs: Vec<(usize, usize)>| {
        if cond {
            out.extend(
                pairs
                    .into_iter()
                    .map(|(from, to)| PredictedEdge { clause, from, to }),
            );
        }
    };
    let min3 = |a: f64, b: f64, c: f64| a.min(b).min(c);
    let max3 = |a: f64, b: f64, c: f64| a.max(b).max(c);

    push(a <= y && z <= x, "out.1", vec![(v1, v2)]);
    push(y <= min3(1.0, a, x), "out.2", vec![(v1, vp)]);
    push(x <= min3(1.0, y, z), "out.3", vec![(v1, vl)]);
    push(a <= min3(1.0, y, z), "out.4", vec![(v2, vp)]);
    push(z <= min3(1.0, x, a), "out.5", vec![(v2, vl)]);
    push(y <= x && a <= z, "out.6", vec![(vp, vl)]);
    push(
        1.0 <= x.min(y),
        "out.7",
        middle.clone().map(|i| (v1, i)).collect(),
    );
    push(
        1.0 <= a.min(z),
        "out.8",
        middle.clone().map(|i| (v2, i)).collect(),
    );
    push(
        y.max(a) <= 1.0,
        "out.9",
        middle.clone().map(|i| (vp, i)).collect(),
    );
    push(
        x.max(z) <= 1.0,
        "out.10",
        middle.clone().map(|i| (vl, i)).collect(),
    );

    push(y <= a && x <= z, "in.1", vec![(v2, v1)]);
    push(max3(1.0, a, x) <= y, "in.2", vec![(vp, v1)]);
    push(max3(1.0, y, z) <= x, "in.3", vec![(vl, v1)]);
    push(max3(1.0, y, z) <= a, "in.4", vec![(vp, v2)]);
    push(max3(1.0, a, x) <= z, "in.5", vec![(vl, v2)]);
    push(x <= y && z <= a, "in.6", vec![(vl, vp)]);
    push(
        x.max(y) <= 1.0,
        "in.7",
        middle.clone().map(|i| (i, v1)).collect(),
    );
    push(
        a.max(z) <= 1.0,
        "in.8",
        middle.clone().map(|i| (i, v2)).collect(),
    );
    push(
        1.0 <= a.min(y),
        "in.9",
        middle.clone().map(|i| (i, vp)).collect(),
    );
    push(1.0 <= x.min(z), "in.10", middle.map(|i| (i, vl)).collect());
    Ok(out)
}

/// Checks the four reverse-edge exclusions against `g` (built from the Perron
/// vector of `Z(p)`); returns a description of each violated clause.
pub fn forbidden_reverse_edges(p: &ZParams, g: &EfficiencyDigraph) -> Result<Vec<String>> {
    p.require_n5()?;
    let n = p.n;
    let (x, y, z, a) = (p.x, p.y, p.z, p.a);
    let (v1, v2, v3, vp, vl) = (0, 1, 2, n - 2, n - 1);
    let clauses = [
        (
            "(3,2) with max{a,z} <= 1, a != z",
            (v3, v2),
            a.max(z) <= 1.0 && a != z,
        ),
        (
            "(3,1) with max{x,y} <= 1, x != y",
            (v3, v1),
            x.max(y) <= 1.0 && x != y,
        ),
        (
            "(3,n) with min{x,z} >= 1, x != z",
            (v3, vl),
            x.min(z) >= 1.0 && x != z,
        ),
        (
            "(3,n-1) with min{y,a} >= 1, a != y",
            (v3, vp),
            y.min(a) >= 1.0 && a != y,
        ),
    ];
    Ok(clauses
        .into_iter()
        .filter(|&(_, (i, j), cond)| cond && g.has_edge(i, j) && g.has_edge(j, i))
        .map(|(what, (i, j), _)| format!("{what}: reverse edge ({},{}) present", j + 1, i + 1))
        .collect())
}

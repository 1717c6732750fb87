//! The four-parameter family `Z_n(x, y, z, a)`: an all-ones matrix with
//! `a_{1,n-1} = y`, `a_{1,n} = x`, `a_{2,n-1} = a`, `a_{2,n} = z` and the
//! matching reciprocals.
//!
//! Swapping vertices `n-1` and `n`, vertices `1` and `2`, or both, maps the
//! family onto itself, so every predicate here can be reduced to the case
//! where `x` is the smallest parameter.

mod lemmas;
mod regions;
mod tables;

use std::fmt;

use serde::Serialize;

use crate::digraph::{build_digraph, sinks, strongly_connected, DEFAULT_EPS_REL};
use crate::error::{Error, Result};
use crate::reciprocal::{perron, MonomialTransform, ReciprocalMatrix};

pub use lemmas::{
    eigen_identity_residuals, forbidden_reverse_edges, predicted_edges, IdentityResiduals,
    PredictedEdge,
};
pub use regions::{guarantee_a1, guarantee_n4, guarantee_n5plus, N4Form, RegionVerdict};
pub use tables::{matching_rows, table_oracle, ClaimCheck, RowMatch, TableRow, TABLE_ROWS};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZParams {
    pub n: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub a: f64,
}

impl ZParams {
    pub fn new(n: usize, x: f64, y: f64, z: f64, a: f64) -> Result<Self> {
        if n < 4 {
            return Err(Error::TooSmall(n, 4));
        }
        for (name, v) in [("x", x), ("y", y), ("z", z), ("a", a)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self { n, x, y, z, a })
    }

    pub(crate) fn require_n5(&self) -> Result<()> {
        if self.n < 5 {
            Err(Error::TooSmall(self.n, 5))
        } else {
            Ok(())
        }
    }

    pub fn with_params(&self, x: f64, y: f64, z: f64, a: f64) -> Self {
        Self {
            x,
            y,
            z,
            a,
            ..*self
        }
    }
}

impl fmt::Display for ZParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Z_{}({}, {}, {}, {})",
            self.n, self.x, self.y, self.z, self.a
        )
    }
}

pub fn z_matrix(p: &ZParams) -> ReciprocalMatrix {
    let n = p.n;
    ReciprocalMatrix::from_upper(n, |i, j| match (i, j) {
        (0, j) if j == n - 2 => p.y,
        (0, j) if j == n - 1 => p.x,
        (1, j) if j == n - 2 => p.a,
        (1, j) if j == n - 1 => p.z,
        _ => 1.0,
    })
    .expect("validated parameters give a reciprocal matrix")
}

/// The monomial symmetries of the family, each a vertex swap with unit diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ZSymmetry {
    Identity,
    /// Swap `n-1` and `n`: `(x, y, z, a) -> (y, x, a, z)`.
    SwapLast,
    /// Swap `1` and `2`: `(x, y, z, a) -> (z, a, x, y)`.
    SwapFirst,
    /// Both swaps: `(x, y, z, a) -> (a, z, y, x)`.
    SwapBoth,
}

impl ZSymmetry {
    /// Fixed order used for deterministic reduction.
    pub const ALL: [ZSymmetry; 4] = [
        ZSymmetry::Identity,
        ZSymmetry::SwapLast,
        ZSymmetry::SwapFirst,
        ZSymmetry::SwapBoth,
    ];

    /// Parameters of the image matrix.
    pub fn image(self, p: &ZParams) -> ZParams {
        let (x, y, z, a) = (p.x, p.y, p.z, p.a);
        match self {
            ZSymmetry::Identity => *p,
            ZSymmetry::SwapLast => p.with_params(y, x, a, z),
            ZSymmetry::SwapFirst => p.with_params(z, a, x, y),
            ZSymmetry::SwapBoth => p.with_params(a, z, y, x),
        }
    }

    /// Vertex relabelling; every symmetry is an involution.
    pub fn map_vertex(self, n: usize, v: usize) -> usize {
        let swap_first = matches!(self, ZSymmetry::SwapFirst | ZSymmetry::SwapBoth);
        let swap_last = matches!(self, ZSymmetry::SwapLast | ZSymmetry::SwapBoth);
        match v {
            0 if swap_first => 1,
            1 if swap_first => 0,
            v if v == n - 2 && swap_last => n - 1,
            v if v == n - 1 && swap_last => n - 2,
            v => v,
        }
    }

    /// The permutation transform `Q` with `Q Z(p) Q^{-1} = Z(image(p))`.
    pub fn transform(self, n: usize) -> MonomialTransform {
        MonomialTransform::permutation((0..n).map(|v| self.map_vertex(n, v)).collect())
            .expect("vertex swaps are permutations")
    }

    pub fn label(self) -> &'static str {
        match self {
            ZSymmetry::Identity => "identity",
            ZSymmetry::SwapLast => "(y,x,a,z)",
            ZSymmetry::SwapFirst => "(z,a,x,y)",
            ZSymmetry::SwapBoth => "(a,z,y,x)",
        }
    }
}

/// Outcome of comparing inefficiency with the presence of a sink vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SinkCheck {
    pub perron_value: f64,
    pub efficient: bool,
    pub sink_present: bool,
    /// 0-based sink vertices.
    pub sinks: Vec<usize>,
    /// `efficient == !sink_present`.
    pub agrees: bool,
}

pub fn sink_characterization(p: &ZParams) -> Result<SinkCheck> {
    sink_characterization_with(p, DEFAULT_EPS_REL)
}

pub fn sink_characterization_with(p: &ZParams, eps_rel: f64) -> Result<SinkCheck> {
    p.require_n5()?;
    let a = z_matrix(p);
    let pair = perron(&a)?;
    let g = build_digraph(&a, &pair.vector, eps_rel)?;
    let efficient = strongly_connected(&g).is_strongly_connected();
    let sinks = sinks(&g);
    let sink_present = !sinks.is_empty();
    Ok(SinkCheck {
        perron_value: pair.value,
        efficient,
        sink_present,
        sinks,
        agrees: efficient != sink_present,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reciprocal::monomial_similarity;

    #[test]
    fn matrix_layout() {
        let p = ZParams::new(5, 2.0, 3.0, 4.0, 5.0).unwrap();
        let m = z_matrix(&p);
        assert_eq!(m.get(0, 4), 2.0);
        assert_eq!(m.get(0, 3), 3.0);
        assert_eq!(m.get(1, 4), 4.0);
        assert_eq!(m.get(1, 3), 5.0);
        assert_eq!(m.get(4, 0), 0.5);
        assert_eq!(
            z_matrix(&p.with_params(1.0, 1.0, 1.0, 1.0)),
            ReciprocalMatrix::ones(5).unwrap()
        );

        let m6 = z_matrix(&ZParams::new(6, 2.0, 3.0, 4.0, 5.0).unwrap());
        for i in 2..4 {
            assert!(m6.row(i).iter().all(|&v| v == 1.0));
        }
    }

    #[test]
    fn params_validation() {
        assert!(ZParams::new(3, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ZParams::new(5, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(ZParams::new(5, 1.0, f64::NAN, 1.0, 1.0).is_err());
        assert!(ZParams::new(4, 1.0, 1.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn symmetries_are_exact_similarities() {
        for n in [4, 5, 7] {
            let p = ZParams::new(n, 0.3, 2.0, 5.0, 0.7).unwrap();
            for sym in ZSymmetry::ALL {
                let image = monomial_similarity(&z_matrix(&p), &sym.transform(n)).unwrap();
                assert_eq!(image, z_matrix(&sym.image(&p)), "{sym:?} n={n}");
                assert_eq!(sym.image(&sym.image(&p)), p);
            }
        }
    }

    #[test]
    fn sink_check_consistent_point() {
        let s = sink_characterization(&ZParams::new(5, 1.0, 1.0, 1.0, 1.0).unwrap()).unwrap();
        assert!(s.efficient && !s.sink_present && s.agrees);
        assert!(sink_characterization(&ZParams::new(4, 1.0, 1.0, 1.0, 1.0).unwrap()).is_err());
    }
}

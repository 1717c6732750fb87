//! Parameter regions on which the Perron vector of `Z_n` is known to be efficient.
//!
//! Exception clauses are evaluated with strict and non-strict inequalities
//! exactly as stated; a boundary point that satisfies no clause is
//! classified as guaranteed efficient.

use serde::Serialize;

use super::{ZParams, ZSymmetry};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionVerdict {
    pub guaranteed_efficient: bool,
    /// Clause label such as `"T5(i)"`; `None` iff guaranteed.
    pub matched_exception: Option<String>,
    pub reduction_used: ZSymmetry,
}

/// Theorem number attached to each reduction in clause labels.
fn theorem_label(sym: ZSymmetry) -> u8 {
    match sym {
        ZSymmetry::Identity => 5,
        ZSymmetry::SwapLast => 6,
        ZSymmetry::SwapFirst => 7,
        ZSymmetry::SwapBoth => 8,
    }
}

/// Exception clauses for the case `x <= min{a, y, z}`.
fn x_minimal_exception(x: f64, y: f64, z: f64, a: f64) -> Option<&'static str> {
    if x < z && z < a && a < y && z < 1.0 {
        Some("i")
    } else if x < y && y < a && a < z && 1.0 < a {
        Some("ii")
    } else if x <= a && a < 1.0 && 1.0 < y.min(z) {
        Some("iii")
    } else {
        None
    }
}

/// Verdict for `n >= 5`: reduce by a symmetry so that `x` is minimal (first
/// match in [`ZSymmetry::ALL`] order), then test the three exception clauses.
pub fn guarantee_n5plus(p: &ZParams) -> Result<RegionVerdict> {
    p.require_n5()?;
    Ok(region_verdict(p))
}

pub(crate) fn region_verdict(p: &ZParams) -> RegionVerdict {
    let min = p.x.min(p.y).min(p.z).min(p.a);
    let sym = ZSymmetry::ALL
        .into_iter()
        .find(|s| s.image(p).x == min)
        .expect("one coordinate attains the minimum");
    let q = sym.image(p);
    let matched =
        x_minimal_exception(q.x, q.y, q.z, q.a).map(|c| format!("T{}({c})", theorem_label(sym)));
    RegionVerdict {
        guaranteed_efficient: matched.is_none(),
        matched_exception: matched,
        reduction_used: sym,
    }
}

/// Verdict for the slice `a = 1`, `n >= 5`, from its own four exception clauses.
pub fn guarantee_a1(n: usize, x: f64, y: f64, z: f64) -> Result<RegionVerdict> {
    ZParams::new(n, x, y, z, 1.0)?.require_n5()?;
    let clause = if 1.0 < z && z < x && x < y {
        Some("i")
    } else if z < 1.0 && 1.0 < y && y < x {
        Some("ii")
    } else if z < x && x < y && y < 1.0 {
        Some("iii")
    } else if x < z && z < 1.0 && 1.0 < y {
        Some("iv")
    } else {
        None
    };
    Ok(RegionVerdict {
        guaranteed_efficient: clause.is_none(),
        matched_exception: clause.map(|c| format!("T9({c})")),
        reduction_used: ZSymmetry::Identity,
    })
}

/// Two equivalent descriptions of the efficient region of `Z_4(x, y, z, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum N4Form {
    SixCases,
    RegionComplement,
}

pub fn guarantee_n4(x: f64, y: f64, z: f64, form: N4Form) -> bool {
    match form {
        N4Form::SixCases => {
            (y <= x && x <= z && y <= 1.0 && 1.0 <= z)
                || (y <= x && y <= 1.0 && z <= 1.0 && z <= x)
                || (1.0 <= y && y <= x && 1.0 <= z && z <= x)
                || (z <= x && x <= y && 1.0 <= y && z <= 1.0)
                || (x <= y && 1.0 <= y && 1.0 <= z && x <= z)
                || (x <= y && y <= 1.0 && x <= z && z <= 1.0)
        }
        N4Form::RegionComplement => {
            let (lo_1x, hi_1x) = (x.min(1.0), x.max(1.0));
            let (lo_yz, hi_yz) = (y.min(z), y.max(z));
            let distinct = x != 1.0 && y != z;
            let interleaved = lo_1x < lo_yz && lo_yz < hi_1x && hi_1x < hi_yz;
            let mirrored = lo_yz < lo_1x && lo_1x < hi_yz && hi_yz < hi_1x;
            !(distinct && (interleaved || mirrored))
        }
    }
}

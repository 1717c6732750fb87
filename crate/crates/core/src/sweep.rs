//! Grid sweeps over `Z_n(x, y, z, a)`.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::zfamily::{guarantee_n5plus, sink_characterization_with, ZParams};

/// Default per-axis values.
pub const DEFAULT_AXIS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub params: ZParams,
    pub r: f64,
    pub efficient: bool,
    pub guaranteed: bool,
    pub exception: Option<String>,
    pub sink_present: bool,
    /// Lowest sink vertex, 0-based.
    pub sink_vertex: Option<usize>,
    /// `efficient == !sink_present`.
    pub agrees: bool,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    n: usize,
    x: f64,
    y: f64,
    z: f64,
    a: f64,
    r: f64,
    efficient: bool,
    guaranteed: bool,
    exception: Option<&'a str>,
    sink_present: bool,
    sink_vertex: Option<usize>,
    agrees: bool,
}

pub fn evaluate_point(p: &ZParams, eps_rel: f64) -> Result<SweepRecord> {
    let verdict = guarantee_n5plus(p)?;
    let sink = sink_characterization_with(p, eps_rel)?;
    Ok(SweepRecord {
        params: *p,
        r: sink.perron_value,
        efficient: sink.efficient,
        guaranteed: verdict.guaranteed_efficient,
        exception: verdict.matched_exception,
        sink_present: sink.sink_present,
        sink_vertex: sink.sinks.first().copied(),
        agrees: sink.agrees,
    })
}

/// Every `(x, y, z, a)` in `axis^4`, lexicographic in axis indices with `x` slowest.
pub fn grid_points(n: usize, axis: &[f64]) -> Result<Vec<ZParams>> {
    let mut out = Vec::with_capacity(axis.len().pow(4));
    for &x in axis {
        for &y in axis {
            for &z in axis {
                for &a in axis {
                    out.push(ZParams::new(n, x, y, z, a)?);
                }
            }
        }
    }
    Ok(out)
}

/// Evaluates the whole grid; writes CSV to `out` when given.
pub fn grid_sweep<W: Write>(
    n: usize,
    axis: &[f64],
    eps_rel: f64,
    out: Option<W>,
) -> Result<Vec<SweepRecord>> {
    if n < 5 {
        return Err(Error::TooSmall(n, 5));
    }
    if axis.is_empty() {
        return Err(Error::InvalidParams("axis needs at least one value".into()));
    }
    let records = grid_points(n, axis)?
        .iter()
        .map(|p| evaluate_point(p, eps_rel))
        .collect::<Result<Vec<_>>>()?;
    if let Some(w) = out {
        write_csv(&records, w)?;
    }
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for rec in records {
        let p = &rec.params;
        writer.serialize(CsvRow {
            n: p.n,
            x: p.x,
            y: p.y,
            z: p.z,
            a: p.a,
            r: rec.r,
            efficient: rec.efficient,
            guaranteed: rec.guaranteed,
            exception: rec.exception.as_deref(),
            sink_present: rec.sink_present,
            sink_vertex: rec.sink_vertex.map(|v| v + 1),
            agrees: rec.agrees,
        })?;
    }
    writer.flush()?;
    Ok(())
}

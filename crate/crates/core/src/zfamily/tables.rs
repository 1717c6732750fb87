//! Case tables for `Z_n`, n >= 5: for each order relation among
//! `1, x, y, z, a`, the directed cycles and extra edges that the sign
//! arguments guarantee, plus the vertex that may be a source (efficient
//! cases) or a sink (inefficient cases).
//!
//! Relations are written as chains like `"x<=1<=a<=y,z"`. A comma joins an
//! unordered group: `b<=c,d<=e` means `b <= min{c,d}` and `max{c,d} <= e`.
//! Vertices are `1`, `2`, `3` (standing for the whole middle block), `n-1`
//! and `n`.

use serde::Serialize;

use super::{ZParams, ZSymmetry};
use crate::digraph::EfficiencyDigraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub table: u8,
    pub relation: &'static str,
    /// One or more closed walks, written `"1,n,2,3,n-1,1"`; several are separated by `;`.
    pub cycles: &'static str,
    /// Extra edges written `"2>3"`, separated by `;`.
    pub extra_edges: &'static str,
    pub possible_source: Option<&'static str>,
    pub possible_sink: Option<&'static str>,
    pub efficient: bool,
}

const fn eff(table: u8, relation: &'static str, cycles: &'static str) -> TableRow {
    TableRow {
        table,
        relation,
        cycles,
        extra_edges: "",
        possible_source: None,
        possible_sink: None,
        efficient: true,
    }
}

const fn eff_src(
    table: u8,
    relation: &'static str,
    cycles: &'static str,
    extra: &'static str,
    source: &'static str,
) -> TableRow {
    TableRow {
        table,
        relation,
        cycles,
        extra_edges: extra,
        possible_source: Some(source),
        possible_sink: None,
        efficient: true,
    }
}

const fn ineff(
    table: u8,
    relation: &'static str,
    cycles: &'static str,
    extra: &'static str,
    sink: &'static str,
) -> TableRow {
    TableRow {
        table,
        relation,
        cycles,
        extra_edges: extra,
        possible_source: None,
        possible_sink: Some(sink),
        efficient: false,
    }
}

pub const TABLE_ROWS: &[TableRow] = &[
    // Hamiltonian cycle
    eff(1, "x<=1<=a<=y,z", "1,n,2,3,n-1,1"),
    eff(1, "x<=z<=1<=y<=a", "1,n,3,n-1,2,1"),
    eff(1, "1<=x<=y,z<=a", "1,3,n,n-1,2,1"),
    eff(1, "x<=a<=y<=1<=z", "1,n,2,n-1,3,1"),
    eff(1, "x<=a<=z<=1<=y", "1,n,3,2,n-1,1"),
    eff(1, "x<=y<=1<=z<=a", "1,n,n-1,2,3,1"),
    eff(1, "x<=y,z<=a<=1", "1,n,n-1,3,2,1"),
    // two cycles
    // runs 2 -> 3 -> n-1; edge 2 -> n-1 cannot exist when a > 1
    eff(2, "x<=1<=y,z<=a", "2,3,n-1,2;1,n,n-1,2,1"),
    eff(2, "x<=a<=y,z<=1", "3,1,n,3;3,2,n-1,3"),
    eff(2, "x<=z,y<=1<=a", "1,n,3,1;1,n,n-1,2,1"),
    eff(2, "1<=x<=a<=y,z", "3,n,2,3;3,n-1,1,3"),
    // cycle and one extra edge
    eff_src(3, "1<=x<=z<=a<=y", "3,n,n-1,1,3", "2>3", "2"),
    eff_src(3, "x<=y<=a<=z<=1", "3,2,1,n,3", "n-1>3", "n-1"),
    // cycle and two extra edges
    eff_src(4, "x<=1<=z<=a<=y", "1,n,n-1,1", "2>3;3>n-1", "2"),
    eff_src(4, "x<=y<=a<=1<=z", "1,n,2,1", "n-1>3;3>1", "n-1"),
    // inefficient: cycle and one extra edge
    ineff(5, "z<x<y<a<=1", "3,2,n,n-1,3", "3>1", "1"),
    ineff(5, "x<z<a<y<=1", "3,1,n,n-1,3", "3>2", "2"),
    ineff(5, "y<a<z<x<=1", "3,1,n-1,n,3", "3>2", "2"),
    ineff(5, "a<y<x<z<=1", "3,2,n-1,n,3", "3>1", "1"),
    ineff(5, "1<=a<z<x<y", "3,n-1,1,2,3", "3>n", "n"),
    ineff(5, "1<=y<x<z<a", "3,n-1,2,1,3", "3>n", "n"),
    ineff(5, "1<=z<a<y<x", "3,n,1,2,3", "3>n-1", "n-1"),
    ineff(5, "1<=x<y<a<z", "3,n,2,1,3", "3>n-1", "n-1"),
    // inefficient: cycle and two extra edges
    ineff(6, "x<z<a<1<=y", "1,n,n-1,1", "3>2;n>3", "2"),
    ineff(6, "a<1<=z<x<y", "1,2,n-1,1", "3>n;1>3", "n"),
    ineff(6, "z<x<y<=1<a", "2,n,n-1,2", "3>1;n>3", "1"),
    ineff(6, "y<1<=x<z<a", "1,n-1,2,1", "3>n;2>3", "n"),
    ineff(6, "y<a<z<1<=x", "1,n-1,n,1", "3>2;n-1>3", "2"),
    ineff(6, "z<1<=a<y<x", "1,2,n,1", "3>n-1;1>3", "n-1"),
    ineff(6, "a<y<x<1<=z", "2,n-1,n,2", "3>1;n-1>3", "1"),
    ineff(6, "x<1<=y<a<z", "1,n,2,1", "3>n-1;2>3", "n-1"),
    // inefficient: cycle through every vertex but one
    ineff(7, "x<z<1<=a<y", "1,n,3,n-1,1", "", "2"),
    ineff(7, "y<a<1<=z<x", "1,n-1,3,n,1", "", "2"),
    ineff(7, "z<a<=1<y<x", "1,3,2,n,1", "", "n-1"),
    ineff(7, "x<y<=1<a<z", "1,n,2,3,1", "", "n-1"),
    ineff(7, "z,y<1<a,x", "1,n-1,2,n,1", "", "3"),
    ineff(7, "x,a<1<z,y", "1,n,2,n-1,1", "", "3"),
    ineff(7, "y<x<=1<z<a", "1,n-1,2,3,1", "", "n"),
    ineff(7, "a<z<=1<x<y", "1,3,2,n-1,1", "", "n"),
    ineff(7, "a<y<1<=x<z", "3,n,2,n-1,3", "", "1"),
    ineff(7, "z<x<1<=y<a", "3,n-1,2,n,3", "", "1"),
];

fn symbol_value(p: &ZParams, sym: &str) -> f64 {
    match sym {
        "1" => 1.0,
        "x" => p.x,
        "y" => p.y,
        "z" => p.z,
        "a" => p.a,
        other => panic!("unknown symbol {other:?} in relation"),
    }
}

/// True when `p` satisfies the chain `relation`.
pub fn relation_holds(relation: &str, p: &ZParams) -> bool {
    let mut groups: Vec<(f64, f64)> = Vec::new();
    let mut ops: Vec<bool> = Vec::new(); // true for `<=`
    let mut rest = relation;
    loop {
        let end = rest.find('<').unwrap_or(rest.len());
        let values: Vec<f64> = rest[..end]
            .split(',')
            .map(|s| symbol_value(p, s.trim()))
            .collect();
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        groups.push((lo, hi));
        if end == rest.len() {
            break;
        }
        let tail = &rest[end + 1..];
        if let Some(stripped) = tail.strip_prefix('=') {
            ops.push(true);
            rest = stripped;
        } else {
            ops.push(false);
            rest = tail;
        }
    }
    groups.windows(2).zip(ops).all(|(pair, le)| {
        let (left, right) = (pair[0].1, pair[1].0);
        if le {
            left <= right
        } else {
            left < right
        }
    })
}

/// Parses a table vertex name into a 0-based index of `Z_n`.
pub fn parse_vertex(name: &str, n: usize) -> usize {
    match name.trim() {
        "1" => 0,
        "2" => 1,
        "3" => 2,
        "n-1" => n - 2,
        "n" => n - 1,
        other => panic!("unknown vertex {other:?}"),
    }
}

impl TableRow {
    /// Cycle edges of every listed cycle, 0-based, for order `n`.
    pub fn cycle_edges(&self, n: usize) -> Vec<(usize, usize)> {
        self.cycles
            .split(';')
            .flat_map(|cycle| {
                let vs: Vec<usize> = cycle.split(',').map(|v| parse_vertex(v, n)).collect();
                vs.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>()
            })
            .collect()
    }

    pub fn extra_edge_list(&self, n: usize) -> Vec<(usize, usize)> {
        self.extra_edges
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|e| {
                let (from, to) = e.split_once('>').expect("extra edge written as i>j");
                (parse_vertex(from, n), parse_vertex(to, n))
            })
            .collect()
    }
}

/// A row matched by `p` directly or after a symmetry; vertex indices in
/// [`RowMatch::claimed_edges`] and [`RowMatch::possible_sink`] refer to `Z(p)` itself.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowMatch {
    pub row: TableRow,
    pub symmetry: ZSymmetry,
    pub claimed_edges: Vec<(usize, usize)>,
    pub possible_source: Option<usize>,
    pub possible_sink: Option<usize>,
}

/// Every row matched by `p` or one of its symmetry images, identity first.
pub fn matching_rows(p: &ZParams) -> Vec<RowMatch> {
    let n = p.n;
    let mut out = Vec::new();
    for sym in ZSymmetry::ALL {
        let q = sym.image(p);
        for row in TABLE_ROWS.iter().filter(|r| relation_holds(r.relation, &q)) {
            let map = |v: usize| sym.map_vertex(n, v);
            let claimed_edges = row
                .cycle_edges(n)
                .into_iter()
                .chain(row.extra_edge_list(n))
                .map(|(i, j)| (map(i), map(j)))
                .collect();
            out.push(RowMatch {
                row: *row,
                symmetry: sym,
                claimed_edges,
                possible_source: row.possible_source.map(|v| map(parse_vertex(v, n))),
                possible_sink: row.possible_sink.map(|v| map(parse_vertex(v, n))),
            });
        }
    }
    out
}

/// The first matching row, if any part of the tables covers `p`.
pub fn table_oracle(p: &ZParams) -> Option<RowMatch> {
    if p.n < 5 {
        return None;
    }
    matching_rows(p).into_iter().next()
}

/// Result of checking a row's claims against a computed digraph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub missing_edges: Vec<(usize, usize)>,
}

impl RowMatch {
    pub fn check(&self, g: &EfficiencyDigraph) -> ClaimCheck {
        ClaimCheck {
            missing_edges: self
                .claimed_edges
                .iter()
                .copied()
                .filter(|&(i, j)| !g.has_edge(i, j))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(x: f64, y: f64, z: f64, a: f64) -> ZParams {
        ZParams::new(5, x, y, z, a).unwrap()
    }

    #[test]
    fn relations_parse_and_evaluate() {
        assert!(relation_holds("x<=1<=a<=y,z", &params(0.5, 3.0, 2.0, 1.5)));
        assert!(!relation_holds("x<=1<=a<=y,z", &params(0.5, 1.2, 2.0, 1.5)));
        assert!(relation_holds("z,y<1<a,x", &params(2.0, 0.5, 0.25, 4.0)));
        assert!(!relation_holds("z,y<1<a,x", &params(2.0, 1.0, 0.25, 4.0)));
        assert!(relation_holds("x<=y,z<=a<=1", &params(0.25, 0.5, 0.5, 1.0)));
    }

    #[test]
    fn every_row_parses() {
        let p = params(1.0, 1.0, 1.0, 1.0);
        for row in TABLE_ROWS {
            let _ = relation_holds(row.relation, &p);
            for n in [5, 7] {
                let cyc = row.cycle_edges(n);
                assert!(!cyc.is_empty());
                for c in row.cycles.split(';') {
                    let vs: Vec<_> = c.split(',').collect();
                    assert_eq!(vs.first(), vs.last(), "{c} is not closed");
                }
                let _ = row.extra_edge_list(n);
            }
        }
        assert_eq!(TABLE_ROWS.iter().filter(|r| !r.efficient).count(), 26);
    }

    #[test]
    fn first_row_of_first_table() {
        let m = table_oracle(&params(0.5, 3.0, 2.0, 1.5)).unwrap();
        assert_eq!(m.row.table, 1);
        assert_eq!(m.symmetry, ZSymmetry::Identity);
        assert_eq!(
            m.claimed_edges,
            vec![(0, 4), (4, 1), (1, 2), (2, 3), (3, 0)]
        );
    }

    #[test]
    fn inefficient_rows_name_their_sink() {
        let m = table_oracle(&params(0.5, 0.75, 0.25, 1.0)).unwrap();
        assert_eq!((m.row.table, m.row.relation), (5, "z<x<y<a<=1"));
        assert_eq!(m.claimed_edges.last(), Some(&(2, 0)));
        assert_eq!(m.possible_sink, Some(0));

        let m = table_oracle(&params(0.25, 4.0, 0.5, 1.0)).unwrap();
        assert_eq!((m.row.table, m.row.relation), (7, "x<z<1<=a<y"));
        assert_eq!(m.possible_sink, Some(1));
    }

    #[test]
    fn symmetric_match_maps_vertices_back() {
        // (y,x,a,z) image of a first-table point
        let p = params(3.0, 0.5, 1.5, 2.0);
        let m = table_oracle(&p).unwrap();
        assert_eq!(m.symmetry, ZSymmetry::SwapLast);
        assert_eq!(m.claimed_edges[0], (0, 3));
    }
}

//! The efficiency digraph of a reciprocal matrix and a positive vector.
//!
//! Vertex `i` points at `j` when `w_i / w_j >= a_ij`. A vector is efficient
//! exactly when this digraph is strongly connected; when it is not, a
//! source component of the condensation can be scaled down to produce a
//! vector that Pareto-dominates the original, which [`dominating_vector`]
//! returns as a certificate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::reciprocal::{pareto_dominates, perron, PerronPair, PositiveVector, ReciprocalMatrix};

/// Default relative slack on edge decisions.
pub const DEFAULT_EPS_REL: f64 = 1e-9;
/// Largest order for which [`hamiltonian_cycle`] runs.
pub const HAMILTONIAN_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct EfficiencyDigraph {
    n: usize,
    adj: Vec<bool>,
    eps_rel: f64,
}

impl EfficiencyDigraph {
    /// A digraph from an explicit 0-based edge list; self-loops are dropped.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![false; n * n];
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j),
                    order: n,
                });
            }
            if i != j {
                adj[i * n + j] = true;
            }
        }
        Ok(Self {
            n,
            adj,
            eps_rel: 0.0,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn eps_rel(&self) -> f64 {
        self.eps_rel
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    /// Edges in row-major order, 0-based.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_edge(i, j))
            .collect()
    }

    pub fn out_neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.has_edge(i, j))
    }

    pub fn in_degree(&self, j: usize) -> usize {
        (0..self.n).filter(|&i| self.has_edge(i, j)).count()
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out_neighbors(i).count()
    }
}

/// Builds `G_{A,w}`: edge `(i, j)`, `i != j`, iff `w_i / w_j >= a_ij (1 - eps_rel)`.
pub fn build_digraph(
    a: &ReciprocalMatrix,
    w: &PositiveVector,
    eps_rel: f64,
) -> Result<EfficiencyDigraph> {
    let n = a.order();
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }
    if !(0.0..1.0).contains(&eps_rel) {
        return Err(Error::InvalidParams(format!(
            "eps_rel must lie in [0, 1), got {eps_rel}"
        )));
    }
    let mut adj = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                adj[i * n + j] = w[i] / w[j] >= a.get(i, j) * (1.0 - eps_rel);
            }
        }
    }
    Ok(EfficiencyDigraph { n, adj, eps_rel })
}

/// Strongly connected components. `labels[v]` is the component of `v`, and
/// labels follow a topological order of the condensation: every edge between
/// components goes from a smaller label to a larger one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    pub count: usize,
    pub labels: Vec<usize>,
}

impl SccDecomposition {
    pub fn is_strongly_connected(&self) -> bool {
        self.count == 1
    }

    pub fn members(&self, label: usize) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&v| self.labels[v] == label)
            .collect()
    }
}

pub fn strongly_connected(g: &EfficiencyDigraph) -> SccDecomposition {
    let n = g.order();
    let mut state = Tarjan {
        g,
        next_index: 0,
        index: vec![usize::MAX; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::with_capacity(n),
        found: Vec::new(),
    };
    for v in 0..n {
        if state.index[v] == usize::MAX {
            state.visit(v);
        }
    }
    // Tarjan emits components in reverse topological order.
    let count = state.found.len();
    let mut labels = vec![0; n];
    for (k, comp) in state.found.iter().enumerate() {
        for &v in comp {
            labels[v] = count - 1 - k;
        }
    }
    SccDecomposition { count, labels }
}

struct Tarjan<'a> {
    g: &'a EfficiencyDigraph,
    next_index: usize,
    index: Vec<usize>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    found: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: usize) {
        self.index[v] = self.next_index;
        self.low[v] = self.next_index;
        self.next_index += 1;
        self.stack.push(v);
        self.on_stack[v] = true;

        for u in 0..self.g.order() {
            if !self.g.has_edge(v, u) {
                continue;
            }
            if self.index[u] == usize::MAX {
                self.visit(u);
                self.low[v] = self.low[v].min(self.low[u]);
            } else if self.on_stack[u] {
                self.low[v] = self.low[v].min(self.index[u]);
            }
        }

        if self.low[v] == self.index[v] {
            let mut comp = Vec::new();
            loop {
                let u = self.stack.pop().expect("tarjan stack underflow");
                self.on_stack[u] = false;
                comp.push(u);
                if u == v {
                    break;
                }
            }
            comp.sort_unstable();
            self.found.push(comp);
        }
    }
}

/// Vertices with no incoming edge.
pub fn sources(g: &EfficiencyDigraph) -> Vec<usize> {
    (0..g.order()).filter(|&v| g.in_degree(v) == 0).collect()
}

/// Vertices with no outgoing edge.
pub fn sinks(g: &EfficiencyDigraph) -> Vec<usize> {
    (0..g.order()).filter(|&v| g.out_degree(v) == 0).collect()
}

/// Checks the structural property of Perron digraphs: any vertex `i` that
/// misses an incoming edge `(k, i)` has some `j` with `(j, i)` present and
/// `(i, j)` absent. Also requires that there be no source at all.
pub fn no_source_theorem_check(a: &ReciprocalMatrix) -> Result<bool> {
    no_source_theorem_check_with(a, DEFAULT_EPS_REL)
}

pub fn no_source_theorem_check_with(a: &ReciprocalMatrix, eps_rel: f64) -> Result<bool> {
    let n = a.order();
    if n < 3 {
        return Err(Error::TooSmall(n, 3));
    }
    let w = perron(a)?.vector;
    let g = build_digraph(a, &w, eps_rel)?;
    Ok(witness_condition_holds(&g) && sources(&g).is_empty())
}

/// The witness half of [`no_source_theorem_check`] on an already built digraph.
pub fn witness_condition_holds(g: &EfficiencyDigraph) -> bool {
    let n = g.order();
    (0..n).all(|i| {
        let misses_incoming = (0..n).any(|k| k != i && !g.has_edge(k, i));
        !misses_incoming || (0..n).any(|j| j != i && g.has_edge(j, i) && !g.has_edge(i, j))
    })
}

/// Depth-first search for a directed Hamiltonian cycle starting at vertex 0,
/// trying successors in increasing index order. The returned cycle lists each
/// vertex once; the closing edge back to the first vertex is implied.
pub fn hamiltonian_cycle(g: &EfficiencyDigraph) -> Result<Option<Vec<usize>>> {
    let n = g.order();
    if n > HAMILTONIAN_LIMIT {
        return Err(Error::TooLargeForSearch {
            order: n,
            limit: HAMILTONIAN_LIMIT,
        });
    }
    if n < 2 {
        return Ok(None);
    }
    let mut path = vec![0];
    let mut used = vec![false; n];
    used[0] = true;
    Ok(extend_path(g, &mut path, &mut used).then_some(path))
}

fn extend_path(g: &EfficiencyDigraph, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let n = g.order();
    let last = *path.last().unwrap();
    if path.len() == n {
        return g.has_edge(last, path[0]);
    }
    for next in 0..n {
        if used[next] || !g.has_edge(last, next) {
            continue;
        }
        used[next] = true;
        path.push(next);
        if extend_path(g, path, used) {
            return true;
        }
        path.pop();
        used[next] = false;
    }
    false
}

/// A vector that Pareto-dominates `w`, or `None` when `G_{A,w}` is strongly
/// connected.
///
/// Takes the source component `S` of the condensation with the smallest
/// label. Every `i` in `S` and `j` outside has `w_i / w_j > a_ij`, so
/// scaling `S` by `beta = max a_ij w_j / w_i < 1` closes the tightest gap
/// and shrinks every other crossing deviation without touching the rest.
pub fn dominating_vector(
    a: &ReciprocalMatrix,
    w: &PositiveVector,
) -> Result<Option<PositiveVector>> {
    dominating_vector_with(a, w, DEFAULT_EPS_REL)
}

pub fn dominating_vector_with(
    a: &ReciprocalMatrix,
    w: &PositiveVector,
    eps_rel: f64,
) -> Result<Option<PositiveVector>> {
    let g = build_digraph(a, w, eps_rel)?;
    Ok(certificate_for(a, w, &g))
}

fn certificate_for(
    a: &ReciprocalMatrix,
    w: &PositiveVector,
    g: &EfficiencyDigraph,
) -> Option<PositiveVector> {
    let scc = strongly_connected(g);
    if scc.is_strongly_connected() {
        return None;
    }
    let n = a.order();
    let in_source: Vec<bool> = scc.labels.iter().map(|&l| l == 0).collect();
    let mut beta = 0.0f64;
    for i in (0..n).filter(|&i| in_source[i]) {
        for j in (0..n).filter(|&j| !in_source[j]) {
            beta = beta.max(a.get(i, j) * w[j] / w[i]);
        }
    }
    debug_assert!(
        beta < 1.0,
        "source component is not strictly separated (beta = {beta})"
    );
    let scaled = (0..n)
        .map(|v| if in_source[v] { beta * w[v] } else { w[v] })
        .collect();
    PositiveVector::new(scaled).ok()
}

/// Everything known about the efficiency of one vector for one matrix.
/// Vertex indices are 0-based here and 1-based in [`EfficiencyReport::to_json`].
#[derive(Clone, Debug, PartialEq)]
pub struct EfficiencyReport {
    pub efficient: bool,
    pub perron: PerronPair,
    pub vector: PositiveVector,
    pub digraph: EfficiencyDigraph,
    pub scc: SccDecomposition,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub hamiltonian: Option<Vec<usize>>,
    pub certificate: Option<PositiveVector>,
    pub eps_rel: f64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    efficient: bool,
    perron_value: f64,
    perron_vector: &'a [f64],
    vector: &'a [f64],
    edges: Vec<[usize; 2]>,
    scc_count: usize,
    sources: Vec<usize>,
    sinks: Vec<usize>,
    hamiltonian: Option<Vec<usize>>,
    certificate: Option<&'a [f64]>,
    eps_rel: f64,
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

impl EfficiencyReport {
    pub fn to_json(&self) -> serde_json::Value {
        let body = ReportJson {
            efficient: self.efficient,
            perron_value: self.perron.value,
            perron_vector: self.perron.vector.as_slice(),
            vector: self.vector.as_slice(),
            edges: self
                .digraph
                .edges()
                .into_iter()
                .map(|(i, j)| [i + 1, j + 1])
                .collect(),
            scc_count: self.scc.count,
            sources: one_based(&self.sources),
            sinks: one_based(&self.sinks),
            hamiltonian: self.hamiltonian.as_deref().map(one_based),
            certificate: self.certificate.as_ref().map(|c| c.as_slice()),
            eps_rel: self.eps_rel,
        };
        serde_json::to_value(body).expect("report serializes")
    }
}

/// Analyzes `w` (the Perron vector when `None`) for `a`.
pub fn analyze(
    a: &ReciprocalMatrix,
    w: Option<&PositiveVector>,
    eps_rel: f64,
) -> Result<EfficiencyReport> {
    let pair = perron(a)?;
    let vector = match w {
        Some(v) => v.clone(),
        None => pair.vector.clone(),
    };
    let digraph = build_digraph(a, &vector, eps_rel)?;
    let scc = strongly_connected(&digraph);
    let hamiltonian = if a.order() <= HAMILTONIAN_LIMIT {
        hamiltonian_cycle(&digraph)?
    } else {
        None
    };
    let certificate = certificate_for(a, &vector, &digraph);
    debug_assert!(certificate
        .as_ref()
        .is_none_or(|c| pareto_dominates(a, &vector, c)));
    Ok(EfficiencyReport {
        efficient: scc.is_strongly_connected(),
        sources: sources(&digraph),
        sinks: sinks(&digraph),
        perron: pair,
        vector,
        scc,
        hamiltonian,
        certificate,
        digraph,
        eps_rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reciprocal::{consistent_from_vector, random_reciprocal, ReciprocityMode};

    fn counterexample() -> (ReciprocalMatrix, PositiveVector) {
        let a = ReciprocalMatrix::from_rows(
            &[
                vec![1.0, 1.0, 2.0],
                vec![1.0, 1.0, 1.0],
                vec![0.5, 1.0, 1.0],
            ],
            ReciprocityMode::validate(),
        )
        .unwrap();
        (a, PositiveVector::new(vec![1.0, 2.0, 3.0]).unwrap())
    }

    #[test]
    fn counterexample_edges_source_and_sink() {
        let (a, w) = counterexample();
        let g = build_digraph(&a, &w, DEFAULT_EPS_REL).unwrap();
        assert_eq!(g.edges(), vec![(1, 0), (2, 0), (2, 1)]);
        assert_eq!(sources(&g), vec![2]);
        assert_eq!(sinks(&g), vec![0]);
        let scc = strongly_connected(&g);
        assert_eq!(scc.count, 3);
        // topological: 3 -> 2 -> 1
        assert_eq!(scc.labels, vec![2, 1, 0]);
    }

    #[test]
    fn counterexample_certificate() {
        let (a, w) = counterexample();
        let cert = dominating_vector(&a, &w).unwrap().unwrap();
        let expected = [1.0, 2.0, 2.0];
        for (c, e) in cert.as_slice().iter().zip(expected) {
            assert!((c - e).abs() < 1e-15);
        }
        assert!(pareto_dominates(&a, &w, &cert));
    }

    #[test]
    fn consistent_matrix_gives_complete_digraph() {
        let v = PositiveVector::new(vec![1.0, 3.0, 0.7, 2.2]).unwrap();
        let a = consistent_from_vector(&v).unwrap();
        let g = build_digraph(&a, &v, DEFAULT_EPS_REL).unwrap();
        assert_eq!(g.edges().len(), 12);
        assert!(sources(&g).is_empty() && sinks(&g).is_empty());
        let scc = strongly_connected(&g);
        assert_eq!((scc.is_strongly_connected(), scc.count), (true, 1));
        assert!(dominating_vector(&a, &v).unwrap().is_none());
    }

    #[test]
    fn dimension_mismatch() {
        let a = ReciprocalMatrix::ones(3).unwrap();
        assert!(build_digraph(&a, &PositiveVector::ones(4), 0.0).is_err());
        assert!(build_digraph(&a, &PositiveVector::ones(3), -1.0).is_err());
    }

    #[test]
    fn hamiltonian_on_small_graphs() {
        let g = EfficiencyDigraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(hamiltonian_cycle(&g).unwrap(), Some(vec![0, 1, 2]));
        let g = EfficiencyDigraph::from_edges(3, &[(1, 0), (2, 0), (2, 1)]).unwrap();
        assert_eq!(hamiltonian_cycle(&g).unwrap(), None);
        let g = EfficiencyDigraph::from_edges(11, &[]).unwrap();
        assert!(matches!(
            hamiltonian_cycle(&g),
            Err(Error::TooLargeForSearch { .. })
        ));
    }

    #[test]
    fn hamiltonian_prefers_lowest_index() {
        let edges: Vec<_> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .collect();
        let g = EfficiencyDigraph::from_edges(4, &edges).unwrap();
        assert_eq!(hamiltonian_cycle(&g).unwrap(), Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn theorem_check_small_cases() {
        assert!(no_source_theorem_check(&ReciprocalMatrix::ones(4).unwrap()).unwrap());
        assert!(no_source_theorem_check(&ReciprocalMatrix::ones(2).unwrap()).is_err());
        for seed in 0..50 {
            let a = random_reciprocal(3 + (seed as usize % 6), seed, 9f64.ln()).unwrap();
            assert!(no_source_theorem_check(&a).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn analyze_ones_and_json_shape() {
        let a = ReciprocalMatrix::ones(5).unwrap();
        let report = analyze(&a, None, DEFAULT_EPS_REL).unwrap();
        assert!(report.efficient);
        assert!(report.sources.is_empty() && report.sinks.is_empty());
        assert!(report.certificate.is_none());
        assert_eq!(report.hamiltonian, Some(vec![0, 1, 2, 3, 4]));
        let json = report.to_json();
        assert_eq!(json["scc_count"], 1);
        assert_eq!(json["hamiltonian"], serde_json::json!([1, 2, 3, 4, 5]));
        assert_eq!(json["edges"].as_array().unwrap().len(), 20);
        assert_eq!(json["edges"][0], serde_json::json!([1, 2]));
        assert!(json["certificate"].is_null());
    }

    #[test]
    fn analyze_with_supplied_vector() {
        let (a, w) = counterexample();
        let report = analyze(&a, Some(&w), DEFAULT_EPS_REL).unwrap();
        assert!(!report.efficient);
        assert_eq!(report.scc.count, 3);
        assert!(report.hamiltonian.is_none());
        let json = report.to_json();
        assert_eq!(json["sources"], serde_json::json!([3]));
        assert_eq!(json["sinks"], serde_json::json!([1]));
        assert_eq!(json["certificate"], serde_json::json!([1.0, 2.0, 2.0]));
    }
}

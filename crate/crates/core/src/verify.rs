//! Named verification suites: each runs a family of numerical checks and
//! reports failures instead of stopping at the first one.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::digraph::{
    build_digraph, dominating_vector_with, hamiltonian_cycle, sources, strongly_connected,
    witness_condition_holds,
};
use crate::error::Result;
use crate::extension::{
    conjugated_extension, constant_row_sum_extension, extend_with_column, is_extension,
    order_preservation_check, remove_index, row_sum_gap, sample_seed, well_behaved_type_i,
    DEFAULT_TIE_TOL, EXTENSION_LOG_SCALE,
};
use crate::reciprocal::{
    log_uniform, monomial_similarity, pareto_dominates, perron, random_reciprocal,
    MonomialTransform, PositiveVector, ReciprocalMatrix,
};
use crate::reference;
use crate::sweep::{grid_points, DEFAULT_AXIS};
use crate::zfamily::{
    eigen_identity_residuals, forbidden_reverse_edges, guarantee_a1, guarantee_n4,
    guarantee_n5plus, matching_rows, predicted_edges, z_matrix, N4Form, RegionVerdict, ZParams,
};

pub const SUITES: [&str; 10] = [
    "example",
    "counterexample",
    "no-source",
    "sinks",
    "regions",
    "lemmas",
    "identities",
    "hamiltonian",
    "n4",
    "a1-slice",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckFailure {
    pub id: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationSummary {
    pub suite: String,
    pub checks_run: usize,
    pub failures: Vec<CheckFailure>,
    #[serde(serialize_with = "as_seconds")]
    pub wall_time: Duration,
}

fn as_seconds<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl VerificationSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Equal up to wall time.
    pub fn same_outcome(&self, other: &VerificationSummary) -> bool {
        self.suite == other.suite
            && self.checks_run == other.checks_run
            && self.failures == other.failures
    }
}

/// Knobs of a suite run. `region_predicate` is swappable so the harness
/// itself can be mutation-tested.
#[derive(Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub eps_rel: f64,
    pub region_predicate: fn(&ZParams) -> Result<RegionVerdict>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            eps_rel: crate::digraph::DEFAULT_EPS_REL,
            region_predicate: guarantee_n5plus,
        }
    }
}

/// One check as run, kept only by [`run_logged`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Default)]
struct Recorder {
    checks_run: usize,
    failures: Vec<CheckFailure>,
    log: Option<Vec<CheckOutcome>>,
}

impl Recorder {
    fn check(&mut self, id: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks_run += 1;
        let detail = if ok { String::new() } else { detail() };
        if let Some(log) = self.log.as_mut() {
            log.push(CheckOutcome {
                id: id.to_string(),
                passed: ok,
                detail: detail.clone(),
            });
        }
        if !ok {
            self.failures.push(CheckFailure {
                id: id.to_string(),
                detail,
            });
        }
    }

    fn result<T>(&mut self, id: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(id, false, || format!("error: {e}"));
                None
            }
        }
    }
}

/// Runs one named suite, or every suite for `"all"`.
pub fn verify_suite(name: &str, config: &SuiteConfig) -> Option<VerificationSummary> {
    let start = Instant::now();
    let mut rec = Recorder::default();
    match name {
        "all" => SUITES.iter().for_each(|s| run(s, config, &mut rec)),
        s if SUITES.contains(&s) => run(s, config, &mut rec),
        _ => return None,
    }
    Some(VerificationSummary {
        suite: name.to_string(),
        checks_run: rec.checks_run,
        failures: rec.failures,
        wall_time: start.elapsed(),
    })
}

/// Like [`verify_suite`] but returns every check, passing ones included.
pub fn run_logged(name: &str, config: &SuiteConfig) -> Option<Vec<CheckOutcome>> {
    let mut rec = Recorder {
        log: Some(Vec::new()),
        ..Recorder::default()
    };
    match name {
        "all" => SUITES.iter().for_each(|s| run(s, config, &mut rec)),
        s if SUITES.contains(&s) => run(s, config, &mut rec),
        _ => return None,
    }
    rec.log
}

pub fn verify_paper_suite() -> VerificationSummary {
    verify_suite("all", &SuiteConfig::default()).expect("\"all\" is a suite")
}

fn run(name: &str, config: &SuiteConfig, rec: &mut Recorder) {
    match name {
        "example" => example_checks(config, rec),
        "counterexample" => counterexample_checks(config, rec),
        "no-source" => no_source_checks(config, rec),
        "sinks" => grid_checks(config, rec, GridCheck::Sinks),
        "regions" => grid_checks(config, rec, GridCheck::Regions),
        "lemmas" => {
            grid_checks(config, rec, GridCheck::Lemmas);
            table_sample_checks(config, rec);
        }
        "identities" => grid_checks(config, rec, GridCheck::Identities),
        "hamiltonian" => hamiltonian_checks(config, rec),
        "n4" => n4_checks(config, rec),
        "a1-slice" => a1_checks(config, rec),
        _ => unreachable!("unknown suite {name}"),
    }
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Verifies a certificate exists and dominates whenever the digraph is not strongly connected.
fn certificate_check(
    rec: &mut Recorder,
    id: &str,
    a: &ReciprocalMatrix,
    w: &PositiveVector,
    eps_rel: f64,
) {
    if let Some(cert) = rec.result(id, dominating_vector_with(a, w, eps_rel)) {
        match cert {
            Some(c) => rec.check(id, pareto_dominates(a, w, &c), || {
                format!(
                    "certificate {:?} does not dominate {:?}",
                    c.as_slice(),
                    w.as_slice()
                )
            }),
            None => {
                let g = build_digraph(a, w, eps_rel).expect("dimensions checked");
                rec.check(id, strongly_connected(&g).is_strongly_connected(), || {
                    "inefficient vector without certificate".into()
                })
            }
        }
    }
}

fn example_checks(config: &SuiteConfig, rec: &mut Recorder) {
    let b = reference::matrix_b();
    let Some(pb) = rec.result("example.perron_b", perron(&b)) else {
        return;
    };
    let dev = max_dev(pb.vector.as_slice(), &reference::B_PERRON);
    rec.check("example.perron_b", dev <= 5e-4, || {
        format!("max deviation {dev:e}")
    });

    let d = MonomialTransform::diagonal(reference::D_DIAG.to_vec()).expect("positive diagonal");
    let computed = monomial_similarity(&b, &d).expect("orders match");
    let printed = reference::printed_b_prime();
    let diff = computed.max_abs_diff(&printed).unwrap();
    rec.check("example.b_prime_entries", diff <= 1e-3, || {
        format!("max entry difference {diff:e}")
    });

    for (label, bp) in [("printed", &printed), ("computed", &computed)] {
        let id = format!("example.b_prime_perron_inefficient[{label}]");
        if let Some(p) = rec.result(&id, perron(bp)) {
            let g = build_digraph(bp, &p.vector, config.eps_rel).unwrap();
            let scc = strongly_connected(&g);
            rec.check(&id, !scc.is_strongly_connected(), || {
                format!(
                    "digraph is strongly connected (Hamiltonian cycle {:?}); the Perron vector is efficient",
                    hamiltonian_cycle(&g).ok().flatten().map(|c| c.iter().map(|v| v + 1).collect::<Vec<_>>())
                )
            });
            certificate_check(
                rec,
                &format!("example.certificate[{label}]"),
                bp,
                &p.vector,
                config.eps_rel,
            );
        }
    }

    let g = build_digraph(&printed, &PositiveVector::ones(5), config.eps_rel).unwrap();
    rec.check(
        "example.e5_efficient",
        strongly_connected(&g).is_strongly_connected(),
        || "e_5 is not efficient for B'".into(),
    );
    let gap = row_sum_gap(&printed);
    rec.check(
        "example.well_behaved",
        well_behaved_type_i(&printed) && (gap - reference::B_PRIME_ROW_SUM_GAP).abs() <= 1e-12,
        || format!("r_1 - r_5 = {gap}"),
    );

    if let Some(ext) = rec.result("example.extension_e6", constant_row_sum_extension(&printed)) {
        let p = perron(&ext.matrix);
        let ok = ext.perron_check <= 1e-10
            && p.as_ref()
                .is_ok_and(|p| max_dev(p.vector.as_slice(), &[1.0; 6]) <= 1e-9);
        rec.check("example.extension_e6", ok, || {
            format!("row-sum residual {:e}", ext.perron_check)
        });
    }

    if let Some(conj) = rec.result(
        "example.conjugated",
        conjugated_extension(&b, &reference::D_DIAG),
    ) {
        let a = &conj.matrix;
        let head = remove_index(a, 5).unwrap();
        rec.check("example.a6_equals_b", head == b, || {
            "A(6) differs from B".into()
        });
        rec.check(
            "example.is_extension",
            is_extension(a, &b, 0.0).unwrap(),
            || "not an extension".into(),
        );
        let closed = max_dev(conj.perron_vector.as_slice(), &reference::EXTENSION_PERRON);
        rec.check("example.v_closed_form", closed <= 1e-15, || {
            format!("deviation {closed:e}")
        });
        if let Some(pa) = rec.result("example.v", perron(a)) {
            let dev = max_dev(pa.vector.as_slice(), &reference::EXTENSION_PERRON);
            rec.check("example.v", dev <= 1e-9, || {
                format!("max deviation {dev:e}")
            });
            let g = build_digraph(a, &pa.vector, config.eps_rel).unwrap();
            rec.check(
                "example.a_efficient",
                strongly_connected(&g).is_strongly_connected(),
                || "Perron vector of the extension is inefficient".into(),
            );
        }
        if let Some(order) = rec.result(
            "example.order_changes",
            order_preservation_check(&b, a, DEFAULT_TIE_TOL),
        ) {
            rec.check("example.order_changes", !order.preserved, || {
                "ordering preserved".into()
            });
        }
    }
}

fn counterexample_checks(config: &SuiteConfig, rec: &mut Recorder) {
    let (a, w) = reference::source_counterexample();
    let w = PositiveVector::new(w).unwrap();
    let g = build_digraph(&a, &w, config.eps_rel).unwrap();
    let edges = g.edges();
    rec.check(
        "counterexample.edges",
        edges == vec![(1, 0), (2, 0), (2, 1)],
        || format!("{edges:?}"),
    );
    let src = sources(&g);
    rec.check("counterexample.sources", src == vec![2], || {
        format!("{src:?}")
    });
    certificate_check(rec, "counterexample.certificate", &a, &w, config.eps_rel);
}

fn no_source_checks(config: &SuiteConfig, rec: &mut Recorder) {
    for k in 0..1000usize {
        let n = 3 + k % 6;
        let seed = sample_seed(config.seed, k);
        let Some(a) = rec.result(
            "no-source.random",
            random_reciprocal(n, seed, EXTENSION_LOG_SCALE),
        ) else {
            continue;
        };
        let Some(p) = rec.result("no-source.random", perron(&a)) else {
            continue;
        };
        let g = build_digraph(&a, &p.vector, config.eps_rel).unwrap();
        rec.check("no-source.random", sources(&g).is_empty(), || {
            format!("n={n} seed={seed}")
        });
        rec.check("no-source.witness", witness_condition_holds(&g), || {
            format!("n={n} seed={seed}")
        });
    }
    for base in 0..20usize {
        let n = 3 + base % 6;
        let base_seed = sample_seed(config.seed ^ 0xA5A5, base);
        let a = random_reciprocal(n, base_seed, EXTENSION_LOG_SCALE).unwrap();
        for k in 0..50usize {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(
                sample_seed(base_seed, k),
            );
            let col: Vec<f64> = (0..n)
                .map(|_| log_uniform(&mut rng, EXTENSION_LOG_SCALE))
                .collect();
            let b = extend_with_column(&a, &col).unwrap();
            let Some(p) = rec.result("no-source.extension", perron(&b)) else {
                continue;
            };
            let g = build_digraph(&b, &p.vector, config.eps_rel).unwrap();
            rec.check("no-source.extension", sources(&g).is_empty(), || {
                format!("base {base} sample {k}")
            });
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum GridCheck {
    Sinks,
    Regions,
    Lemmas,
    Identities,
}

fn grid_checks(config: &SuiteConfig, rec: &mut Recorder, kind: GridCheck) {
    let orders: &[usize] = match kind {
        GridCheck::Sinks | GridCheck::Regions => &[5, 6],
        GridCheck::Lemmas | GridCheck::Identities => &[5, 6, 7],
    };
    let mut labels_seen = std::collections::BTreeSet::new();
    for &n in orders {
        for p in grid_points(n, &DEFAULT_AXIS).unwrap() {
            let tag = || format!("{p}");
            if kind == GridCheck::Identities {
                if let Some(res) = rec.result("identities.residuals", eigen_identity_residuals(&p))
                {
                    let r = res.perron_value;
                    rec.check(
                        "identities.residuals",
                        res.max_derived() <= 1e-9 * r,
                        || format!("{} max derived residual {:e}", tag(), res.max_derived()),
                    );
                    rec.check(
                        "identities.middle",
                        res.middle_spread <= 1e-10 * res.w3,
                        || format!("{} spread {:e}", tag(), res.middle_spread),
                    );
                }
                continue;
            }
            let m = z_matrix(&p);
            let Some(pair) = rec.result("grid.perron", perron(&m)) else {
                continue;
            };
            let g = build_digraph(&m, &pair.vector, config.eps_rel).unwrap();
            let efficient = strongly_connected(&g).is_strongly_connected();
            match kind {
                GridCheck::Sinks => {
                    let sinks = crate::digraph::sinks(&g);
                    rec.check(
                        "sinks.characterization",
                        efficient == sinks.is_empty(),
                        || format!("{} efficient={efficient} sinks={sinks:?}", tag()),
                    );
                }
                GridCheck::Regions => {
                    if let Some(v) = rec.result("regions.soundness", (config.region_predicate)(&p))
                    {
                        rec.check(
                            "regions.soundness",
                            !v.guaranteed_efficient || efficient,
                            || format!("{} guaranteed but inefficient", tag()),
                        );
                        if let Some(label) = v.matched_exception {
                            labels_seen.insert(label);
                        }
                    }
                    if !efficient {
                        certificate_check(
                            rec,
                            "regions.certificate",
                            &m,
                            &pair.vector,
                            config.eps_rel,
                        );
                    }
                }
                GridCheck::Lemmas => {
                    for e in predicted_edges(&p).unwrap() {
                        rec.check("lemmas.predicted", g.has_edge(e.from, e.to), || {
                            format!(
                                "{} clause {} edge ({},{}) missing",
                                tag(),
                                e.clause,
                                e.from + 1,
                                e.to + 1
                            )
                        });
                    }
                    let violations = forbidden_reverse_edges(&p, &g).unwrap();
                    rec.check("lemmas.reverse", violations.is_empty(), || {
                        format!("{} {violations:?}", tag())
                    });
                    if is_generic(&p) {
                        table_check(rec, &p, &g);
                    }
                }
                GridCheck::Identities => unreachable!(),
            }
        }
    }
    if kind == GridCheck::Regions {
        for family in 5..=8 {
            for clause in ["i", "ii", "iii"] {
                let label = format!("T{family}({clause})");
                rec.check("regions.nonvacuous", labels_seen.contains(&label), || {
                    format!("no grid point matches {label}")
                });
            }
        }
    }
}

/// No two of `1, x, y, z, a` coincide. The tables' edge claims are only
/// made for strict orderings; at ties single edges may flip direction.
fn is_generic(p: &ZParams) -> bool {
    let v = [1.0, p.x, p.y, p.z, p.a];
    (0..5).all(|i| (i + 1..5).all(|j| v[i] != v[j]))
}

fn table_check(rec: &mut Recorder, p: &ZParams, g: &crate::digraph::EfficiencyDigraph) {
    for m in matching_rows(p) {
        let missing = m.check(g).missing_edges;
        rec.check("lemmas.tables", missing.is_empty(), || {
            let missing: Vec<_> = missing.iter().map(|(i, j)| (i + 1, j + 1)).collect();
            format!(
                "{p} table {} row {:?}: missing {missing:?}",
                m.row.table, m.row.relation
            )
        });
    }
}

/// Table claims at random generic points, which the coarse grid barely reaches.
fn table_sample_checks(config: &SuiteConfig, rec: &mut Recorder) {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed ^ 0x7AB1E);
    for k in 0..3000usize {
        let n = 5 + k % 3;
        let mut draw = || log_uniform(&mut rng, 2.0);
        let p = ZParams::new(n, draw(), draw(), draw(), draw()).expect("positive draws");
        if !is_generic(&p) {
            continue;
        }
        let m = z_matrix(&p);
        let Some(pair) = rec.result("lemmas.tables", perron(&m)) else {
            continue;
        };
        let g = build_digraph(&m, &pair.vector, config.eps_rel).unwrap();
        table_check(rec, &p, &g);
    }
}

fn hamiltonian_checks(config: &SuiteConfig, rec: &mut Recorder) {
    for k in 0..200usize {
        let n = 3 + k % 5;
        let seed = sample_seed(config.seed ^ 0x4A11, k);
        let a = random_reciprocal(n, seed, EXTENSION_LOG_SCALE).unwrap();
        let Some(p) = rec.result("hamiltonian.equivalence", perron(&a)) else {
            continue;
        };
        let g = build_digraph(&a, &p.vector, config.eps_rel).unwrap();
        let sc = strongly_connected(&g).is_strongly_connected();
        let cycle = hamiltonian_cycle(&g).unwrap();
        rec.check("hamiltonian.equivalence", sc == cycle.is_some(), || {
            format!("n={n} seed={seed} strongly_connected={sc} cycle={cycle:?}")
        });
    }
}

fn n4_checks(config: &SuiteConfig, rec: &mut Recorder) {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed ^ 0x0004);
    for _ in 0..1000 {
        let (x, y, z) = (
            log_uniform(&mut rng, 2.0),
            log_uniform(&mut rng, 2.0),
            log_uniform(&mut rng, 2.0),
        );
        let six = guarantee_n4(x, y, z, N4Form::SixCases);
        let complement = guarantee_n4(x, y, z, N4Form::RegionComplement);
        rec.check("n4.equivalence", six == complement, || {
            format!("({x}, {y}, {z})")
        });
    }
}

fn a1_checks(config: &SuiteConfig, rec: &mut Recorder) {
    for &x in &DEFAULT_AXIS {
        for &y in &DEFAULT_AXIS {
            for &z in &DEFAULT_AXIS {
                let p = ZParams::new(5, x, y, z, 1.0).unwrap();
                let slice = guarantee_a1(5, x, y, z).unwrap();
                if let Some(general) = rec.result("a1.slice", (config.region_predicate)(&p)) {
                    rec.check(
                        "a1.slice",
                        slice.guaranteed_efficient == general.guaranteed_efficient,
                        || {
                            format!(
                                "({x}, {y}, {z}): slice {:?} vs general {:?}",
                                slice, general
                            )
                        },
                    );
                }
            }
        }
    }
}

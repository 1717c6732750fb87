//! Efficiency of Perron priority vectors for reciprocal pairwise comparison
//! matrices.
//!
//! A positive vector `w` is efficient for a reciprocal matrix `A` when no
//! other vector approximates every entry `a_ij` at least as well by
//! `w_i / w_j` and one entry strictly better. Efficiency is decided through
//! the digraph with an edge `i -> j` whenever `w_i / w_j >= a_ij`: `w` is
//! efficient exactly when that digraph is strongly connected.
//!
//! The library uses 0-based vertex indices throughout. The CLI and the JSON
//! reports it writes are 1-based.

pub mod digraph;
pub mod error;
pub mod extension;
pub mod io;
pub mod reciprocal;
pub mod reference;
pub mod sweep;
pub mod verify;
pub mod zfamily;

pub use digraph::{
    analyze, build_digraph, dominating_vector, hamiltonian_cycle, no_source_theorem_check, sinks,
    sources, strongly_connected, EfficiencyDigraph, EfficiencyReport, SccDecomposition,
    DEFAULT_EPS_REL,
};
pub use error::{Error, Result};
pub use extension::{
    conjugated_extension, constant_row_sum_extension, extend_with_column, remove_index,
};
pub use reciprocal::{
    consistent_from_vector, monomial_similarity, pareto_dominates, perron, random_reciprocal,
    MonomialTransform, PerronPair, PositiveVector, ReciprocalMatrix, ReciprocityMode,
};
pub use verify::{verify_paper_suite, verify_suite, SuiteConfig, VerificationSummary};
pub use zfamily::{z_matrix, ZParams, ZSymmetry};

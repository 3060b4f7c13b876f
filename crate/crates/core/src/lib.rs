//! Workbench for parallel repetition of multi-prover games.
//!
//! The library is organized around question sets viewed as r-regular,
//! r-partite hypergraphs:
//!
//! * [`hypergraph`] — hypergraphs, homomorphisms, sections, named families.
//! * [`homsearch`] — exhaustive backtracking search for collapse homomorphisms.
//! * [`conditioning`] — the doubling/collapse calculus: certificates, replay,
//!   normalization, same-set-hitting distributions and the exponential
//!   repetition bound for constructible question sets.
//! * [`spgraph`] — series-parallel machinery: recognition, spines, and the
//!   certificate synthesizer for bipartite graphs of treewidth at most two.
//! * [`games`] — games, exact values, parallel repetition, the line-set game,
//!   density Hales-Jewett and coloring-game combinatorics.
//! * [`cycles`] — bitmask enumeration engine for the non-constructibility
//!   checks on cycles with shortcuts.
//!
//! All probabilities and measures are exact rationals ([`Ratio`]); floating
//! point appears only in the closed-form repetition bounds.

pub mod conditioning;
pub mod cycles;
pub mod games;
pub mod homsearch;
pub mod hypergraph;
pub mod spgraph;

/// Exact rational used for every probability, measure and game value.
pub type Ratio = num::BigRational;

/// Builds a `Ratio` from an integer pair.
pub fn ratio(num: i64, den: i64) -> Ratio {
    Ratio::new(num.into(), den.into())
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("map for side {side} is not total: missing vertex {vertex}")]
    MapNotTotal { side: usize, vertex: u32 },
    #[error("side {side}: {vertex} is not a vertex of the graph")]
    UnknownVertex { side: usize, vertex: u32 },
    #[error("subset violation on side {side}: {vertex} not in the graph")]
    SubsetViolation { side: usize, vertex: u32 },
    #[error("edge {edge:?} maps outside the section (step {step:?})")]
    HomomorphismViolation { edge: Vec<u32>, step: Option<usize> },
    #[error("certificate step {step} failed: {source}")]
    CertificateStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("budget exceeded: {needed} candidates, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

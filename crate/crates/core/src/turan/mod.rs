//! Basket witness hypergraphs and the codegree density bound ledger.

mod ledger;
mod witness;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::hypergraph::HypergraphError;

pub use ledger::{
    add_bases, add_reference, annotations, build_ledger, default_bases, derive_bounds, provenance_string,
    reference_facts, reference_facts_up_to, replay, replay_fact, to_csv, Alternative, BaseFact, BoundFact, Ledger,
    SourceClass, Step, CAP_TABLE, DEFAULT_MAX_K, DEFAULT_MAX_R,
};
pub use witness::{
    build_witness, certify_witness, certify_witness_capped, witness_codegree, BasketWitness, WitnessCertificate,
    CODEGREE_SUBSET_CAP, CROSS_CHECK_MAX_N,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TuranError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("r = {r} must be at least 2 and a multiple of the exponent {exponent}")]
    Uniformity { r: u32, exponent: u64 },
    #[error("n = {n} is smaller than r = {r}")]
    TooFewVertices { n: u32, r: u32 },
    #[error("{0:?} is not a set of r - 1 distinct vertices")]
    BadSubset(Vec<u32>),
    #[error("{what} needs {work} steps, above the cap of {cap}")]
    TooLarge { what: &'static str, work: u128, cap: u128 },
    #[error("invalid base fact: {0}")]
    Base(String),
    #[error("replay failed: {0}")]
    Replay(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

//! Exact zero-sum combinatorics over finite abelian groups.
//!
//! The crate computes Sidon numbers, generalized Erdős–Ginzburg–Ziv
//! constants `s_r(G)`, zero-free set sizes `beta_r(G)` and cap sizes by
//! certificate-producing exhaustive search, builds the explicit extremal
//! constructions (moment curves over GF(2^k)), evaluates the closed-form
//! bounds that go with them, and turns solved constants into codegree
//! Turán density bounds through basket witness hypergraphs.

pub mod algebra;
pub mod construct;
pub mod hypergraph;
pub mod io;
pub mod solver;
pub mod turan;
pub mod zerosum;

pub use algebra::{AlgebraError, FieldContext, FieldElement, GroupElement, GroupSpec};
pub use construct::{ConstructionOutput, CmTable};
pub use hypergraph::RGraph;
pub use solver::{Budget, SearchResult};
pub use turan::{BasketWitness, BoundFact};
pub use zerosum::{GSequence, ZeroSumWitness};

//! GF(2^k) arithmetic and finite abelian groups.

mod field;
mod group;

pub use field::{
    clmul, field_mul, field_pow, is_irreducible, least_irreducible, poly_rem, FieldContext,
    FieldElement, DEFAULT_MODULI, MAX_FIELD_DEGREE,
};
pub use group::{
    enumerate_elements, group_add, group_neg, Elements, GroupElement, GroupSpec, IndexArith,
    DEFAULT_ELEMENT_CAP, MAX_GROUP_ORDER,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("a group needs at least one cyclic factor")]
    EmptyGroup,
    #[error("cyclic factor Z{0} is not allowed; moduli must be at least 2")]
    Modulus(u32),
    #[error("group order exceeds 2^64")]
    OrderOverflow,
    #[error("group of order {order} exceeds the element cap {cap}")]
    TooLarge { order: u128, cap: u64 },
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("coordinate {coord} is {value}, outside [0, {modulus})")]
    Residue { coord: usize, value: u32, modulus: u32 },
    #[error("index {index} outside a group of order {order}")]
    IndexRange { index: u64, order: u128 },
    #[error("group {0} has no packed encoding")]
    NotPacked(String),
    #[error("packed value {bits:#x} has bits beyond dimension {d}")]
    PackedRange { bits: u64, d: usize },
    #[error("unsupported field degree {0}")]
    FieldDegree(u32),
    #[error("modulus {modulus:#x} does not have degree {k}")]
    ModulusDegree { k: u32, modulus: u64 },
    #[error("modulus {0:#x} is reducible over GF(2)")]
    Reducible(u64),
    #[error("field element {bits:#x} has bits at or above degree {k}")]
    FieldElementRange { bits: u64, k: u32 },
    #[error("{0}")]
    Parse(String),
}

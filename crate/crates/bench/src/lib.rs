//! Fixtures shared by the benchmarks.

use zerosum_core::zerosum::GSequence;
use zerosum_core::GroupSpec;

pub fn group(text: &str) -> GroupSpec {
    text.parse().expect("valid group")
}

/// A deterministic sequence of `len` elements, stepping through the group
/// by a stride coprime to small orders.
pub fn strided_sequence(spec: &GroupSpec, len: u64) -> GSequence {
    let order = spec.order() as u64;
    let items = (0..len).map(|i| spec.element_at((i * 7 + i / order) % order).expect("index in range"));
    GSequence::from_elements(spec.clone(), items).expect("elements of spec")
}

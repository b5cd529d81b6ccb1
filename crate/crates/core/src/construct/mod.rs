//! Explicit extremal constructions, each paired with a machine-checkable
//! claim that is re-validated through [`crate::zerosum`].

mod bounds;

pub use bounds::{
    b_d, cm_constant, eta, s4_upper_bound, sidon_upper_bound, z3_egz_upper, CmTable, RealBound,
    SidonUpperBound,
};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, FieldContext, GroupElement, GroupSpec};
use crate::zerosum::{
    find_zero_sum_subsequence, is_sidon_set, is_zero_free_set, sidon_collision, GSequence,
    ZeroSumError,
};

/// Largest group dimension a construction may produce (packed `Z2^d`).
pub const MAX_CONSTRUCTION_DIM: u32 = 64;

/// Largest number of points a construction may produce.
pub const MAX_CONSTRUCTION_POINTS: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    ZeroSum(#[from] ZeroSumError),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("input set is not a Sidon set")]
    NotSidon,
    #[error("bound calculator input out of range: {0}")]
    Range(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    SidonBasis,
    SidonD4,
    MomentCurve,
    ExtremalSequence,
    S4LowerSequence,
}

/// The property a construction claims for its payload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimedProperty {
    Sidon,
    /// Zero-free of every listed rank.
    ZeroFree { ranks: Vec<u64> },
    /// No zero-sum subsequence of length `r`.
    NoZeroSumSubsequence { r: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Set(Vec<GroupElement>),
    Sequence(GSequence),
}

impl Payload {
    pub fn size(&self) -> u64 {
        match self {
            Payload::Set(s) => s.len() as u64,
            Payload::Sequence(s) => s.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionOutput {
    pub kind: ConstructionKind,
    pub spec: GroupSpec,
    pub payload: Payload,
    pub claimed: ClaimedProperty,
}

/// Result of re-checking a claimed property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub holds: bool,
    pub failure: Option<String>,
}

impl ConstructionOutput {
    /// Re-checks the claimed property from scratch.
    pub fn validate(&self) -> Result<PropertyCheck, ConstructError> {
        let ok = PropertyCheck { holds: true, failure: None };
        match (&self.claimed, &self.payload) {
            (ClaimedProperty::Sidon, Payload::Set(set)) => {
                Ok(match sidon_collision(&self.spec, set) {
                    None => ok,
                    Some(((a, b), (c, d))) => PropertyCheck {
                        holds: false,
                        failure: Some(format!("{a} + {b} = {c} + {d}")),
                    },
                })
            }
            (ClaimedProperty::ZeroFree { ranks }, Payload::Set(set)) => {
                for &r in ranks {
                    let check = is_zero_free_set(&self.spec, set, r)?;
                    if let Some(v) = check.violation {
                        let items: Vec<String> = v.iter().map(|x| format!("({x})")).collect();
                        return Ok(PropertyCheck {
                            holds: false,
                            failure: Some(format!("rank {r}: {} sum to zero", items.join(" + "))),
                        });
                    }
                }
                Ok(ok)
            }
            (ClaimedProperty::NoZeroSumSubsequence { r }, Payload::Sequence(seq)) => {
                Ok(match find_zero_sum_subsequence(seq, *r)? {
                    None => ok,
                    Some(w) => {
                        let items: Vec<String> = w.items().map(|x| format!("({x})")).collect();
                        PropertyCheck {
                            holds: false,
                            failure: Some(format!("length {r}: {} sum to zero", items.join(" + "))),
                        }
                    }
                })
            }
            _ => Err(ConstructError::Parameter("payload does not fit the claimed property".into())),
        }
    }
}

fn z2(d: usize) -> Result<GroupSpec, ConstructError> {
    Ok(GroupSpec::power(2, d)?)
}

/// The `d + 1` vectors of Hamming weight at most one in `Z2^d`.
pub fn sidon_basis(d: usize) -> Result<ConstructionOutput, ConstructError> {
    if d == 0 || d > MAX_CONSTRUCTION_DIM as usize {
        return Err(ConstructError::Parameter(format!("d = {d}")));
    }
    let spec = z2(d)?;
    let mut set = vec![spec.identity()];
    for i in 0..d {
        let mut coords = vec![0u32; d];
        coords[d - 1 - i] = 1;
        set.push(spec.element(coords)?);
    }
    set.sort();
    Ok(ConstructionOutput {
        kind: ConstructionKind::SidonBasis,
        spec,
        payload: Payload::Set(set),
        claimed: ClaimedProperty::Sidon,
    })
}

/// The weight-at-most-one vectors of `Z2^4` together with `(1,1,1,1)`.
pub fn sidon_d4() -> Result<ConstructionOutput, ConstructError> {
    let mut out = sidon_basis(4)?;
    if let Payload::Set(set) = &mut out.payload {
        set.push(out.spec.element(vec![1, 1, 1, 1])?);
        set.sort();
    }
    out.kind = ConstructionKind::SidonD4;
    Ok(out)
}

/// Points `(x, x^3, ..., x^(2m-1))` for `x` in GF(2^k), as elements of
/// `Z2^(mk)`; block `i` holds `x^(2i+1)`, little-endian within the block.
fn moment_points(ctx: &FieldContext, m: u32) -> Result<(GroupSpec, Vec<GroupElement>), ConstructError> {
    let k = ctx.degree();
    if m == 0 {
        return Err(ConstructError::Parameter("m must be at least 1".into()));
    }
    let dim = m.checked_mul(k).filter(|&d| d <= MAX_CONSTRUCTION_DIM).ok_or_else(|| {
        ConstructError::Parameter(format!("m*k = {}*{} exceeds {MAX_CONSTRUCTION_DIM}", m, k))
    })?;
    if ctx.order() > MAX_CONSTRUCTION_POINTS {
        return Err(ConstructError::Parameter(format!("2^{k} points exceed the cap")));
    }
    let spec = z2(dim as usize)?;
    let mut points = Vec::with_capacity(ctx.order() as usize);
    for x in ctx.elements() {
        let mut coords = vec![0u32; dim as usize];
        for block in 0..m {
            let y = ctx.pow(x, 2 * block as u64 + 1).bits();
            for b in 0..k {
                coords[(block * k + b) as usize] = ((y >> b) & 1) as u32;
            }
        }
        points.push(spec.element(coords)?);
    }
    Ok((spec, points))
}

pub fn moment_curve(m: u32, k: u32) -> Result<ConstructionOutput, ConstructError> {
    moment_curve_in(&FieldContext::new(k)?, m)
}

/// Moment-curve set over an explicit field context; zero-free of every even
/// rank up to `2m`.
pub fn moment_curve_in(ctx: &FieldContext, m: u32) -> Result<ConstructionOutput, ConstructError> {
    let (spec, mut points) = moment_points(ctx, m)?;
    points.sort();
    Ok(ConstructionOutput {
        kind: ConstructionKind::MomentCurve,
        spec,
        payload: Payload::Set(points),
        claimed: ClaimedProperty::ZeroFree { ranks: (1..=m as u64).map(|n| 2 * n).collect() },
    })
}

/// Length `2^k + 2m - 2` sequence over `Z2^(mk)` with no zero-sum
/// subsequence of length `2m`: the moment-curve point at `x = 0` repeated
/// `2m - 1` times, every other point once.
pub fn extremal_sequence_s2m(m: u32, k: u32) -> Result<ConstructionOutput, ConstructError> {
    let ctx = FieldContext::new(k)?;
    let (spec, points) = moment_points(&ctx, m)?;
    let mut seq = GSequence::new(spec.clone());
    for (i, p) in points.into_iter().enumerate() {
        let copies = if i == 0 { 2 * m - 1 } else { 1 };
        seq.push(p, copies)?;
    }
    Ok(ConstructionOutput {
        kind: ConstructionKind::ExtremalSequence,
        spec,
        payload: Payload::Sequence(seq),
        claimed: ClaimedProperty::NoZeroSumSubsequence { r: 2 * m as u64 },
    })
}

/// The largest exact Sidon set bundled for `d <= 4`.
fn exact_sidon_set(d: usize) -> Result<ConstructionOutput, ConstructError> {
    match d {
        1..=3 => sidon_basis(d),
        4 => sidon_d4(),
        _ => Err(ConstructError::Parameter(format!(
            "no bundled maximum Sidon set for d = {d}; pass one explicitly"
        ))),
    }
}

/// Sequence of length `beta(Z2^d) + 2` with no zero-sum subsequence of
/// length 4, for `d <= 4`.
pub fn s4_lower_sequence(d: usize) -> Result<ConstructionOutput, ConstructError> {
    let base = exact_sidon_set(d)?;
    let Payload::Set(set) = base.payload else { unreachable!() };
    s4_lower_sequence_from(&base.spec, &set)
}

/// Extends a Sidon set by two more copies of its last element.
pub fn s4_lower_sequence_from(spec: &GroupSpec, sidon: &[GroupElement]) -> Result<ConstructionOutput, ConstructError> {
    if !is_sidon_set(spec, sidon) {
        return Err(ConstructError::NotSidon);
    }
    let distinct: BTreeSet<&GroupElement> = sidon.iter().collect();
    if distinct.len() != sidon.len() || sidon.is_empty() {
        return Err(ConstructError::Parameter("need a non-empty set of distinct elements".into()));
    }
    let last = (*distinct.iter().next_back().unwrap()).clone();
    let mut seq = GSequence::from_elements(spec.clone(), sidon.iter().cloned())?;
    seq.push(last, 2)?;
    Ok(ConstructionOutput {
        kind: ConstructionKind::S4LowerSequence,
        spec: spec.clone(),
        payload: Payload::Sequence(seq),
        claimed: ClaimedProperty::NoZeroSumSubsequence { r: 4 },
    })
}

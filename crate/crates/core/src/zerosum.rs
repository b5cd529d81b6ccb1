//! Sequences over a group and exact zero-sum subsequence detection.
//!
//! A sequence is kept as a multiset: whether a zero-sum subsequence of a
//! given length exists depends only on multiplicities. Detection is a
//! layered reachability DP over `(elements scanned, copies chosen, partial
//! sum)` with backtracking, so every positive answer comes with a witness.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::algebra::{AlgebraError, GroupElement, GroupSpec, IndexArith, DEFAULT_ELEMENT_CAP};

/// Default cap on DP table size, in bits.
pub const DEFAULT_DP_CELL_CAP: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeroSumError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("subsequence length must be at least 1")]
    ZeroLength,
    #[error("DP table of {cells} cells exceeds the cap of {cap}")]
    TableTooLarge { cells: u128, cap: u64 },
    #[error("element {0} does not belong to the group")]
    Foreign(String),
    #[error("element {0} appears more than once in a set")]
    Duplicate(String),
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
}

/// A finite sequence over `G`, up to order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSequence {
    spec: GroupSpec,
    mults: BTreeMap<GroupElement, u32>,
    length: u64,
}

impl GSequence {
    pub fn new(spec: GroupSpec) -> Self {
        GSequence { spec, mults: BTreeMap::new(), length: 0 }
    }

    pub fn from_elements<I>(spec: GroupSpec, items: I) -> Result<Self, ZeroSumError>
    where
        I: IntoIterator<Item = GroupElement>,
    {
        let mut seq = GSequence::new(spec);
        for x in items {
            seq.push(x, 1)?;
        }
        Ok(seq)
    }

    pub fn from_counts<I>(spec: GroupSpec, counts: I) -> Result<Self, ZeroSumError>
    where
        I: IntoIterator<Item = (GroupElement, u32)>,
    {
        let mut seq = GSequence::new(spec);
        for (x, c) in counts {
            seq.push(x, c)?;
        }
        Ok(seq)
    }

    /// Adds `count` copies of `x`.
    pub fn push(&mut self, x: GroupElement, count: u32) -> Result<(), ZeroSumError> {
        if count == 0 {
            return Err(ZeroSumError::ZeroMultiplicity);
        }
        if !self.spec.contains(&x) {
            return Err(ZeroSumError::Foreign(x.to_string()));
        }
        *self.mults.entry(x).or_insert(0) += count;
        self.length += count as u64;
        Ok(())
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> u64 {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn mults(&self) -> &BTreeMap<GroupElement, u32> {
        &self.mults
    }

    pub fn multiplicity(&self, x: &GroupElement) -> u32 {
        self.mults.get(x).copied().unwrap_or(0)
    }

    pub fn distinct(&self) -> usize {
        self.mults.len()
    }

    /// Items with repetition, in non-decreasing element order.
    pub fn items(&self) -> impl Iterator<Item = &GroupElement> {
        self.mults.iter().flat_map(|(x, &c)| std::iter::repeat_n(x, c as usize))
    }

    pub fn total(&self) -> GroupElement {
        self.spec.sum(self.items())
    }

    /// True if `self` is contained in `other` pointwise.
    pub fn is_subsequence_of(&self, other: &GSequence) -> bool {
        self.spec == other.spec && self.mults.iter().all(|(x, &c)| other.multiplicity(x) >= c)
    }
}

/// A zero-sum subsequence of prescribed length: how many copies of each
/// element are picked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSumWitness {
    pub target_r: u64,
    pub picks: BTreeMap<GroupElement, u32>,
}

impl ZeroSumWitness {
    pub fn len(&self) -> u64 {
        self.picks.values().map(|&c| c as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn items(&self) -> impl Iterator<Item = &GroupElement> {
        self.picks.iter().flat_map(|(x, &c)| std::iter::repeat_n(x, c as usize))
    }

    /// Checks size, pointwise containment and that the sum is the identity.
    pub fn validates_against(&self, seq: &GSequence) -> bool {
        self.len() == self.target_r
            && self.picks.iter().all(|(x, &c)| seq.multiplicity(x) >= c)
            && seq.spec().sum(self.items()) == seq.spec().identity()
    }
}

/// Outcome of a zero-free set check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroFreeCheck {
    pub zero_free: bool,
    /// `r` distinct elements summing to the identity, when not zero-free.
    pub violation: Option<Vec<GroupElement>>,
}

fn shifted_into(dst: &mut FixedBitSet, src: &FixedBitSet, by: usize, arith: &IndexArith) {
    for g in src.ones() {
        dst.insert(arith.add(g, by));
    }
}

/// Finds `r` items (with multiplicity) of `seq` summing to the identity.
///
/// Among all witnesses it returns the one that takes as few copies as
/// possible of the last element in enumeration order, then of the one before
/// it, and so on.
pub fn find_zero_sum_subsequence(
    seq: &GSequence,
    r: u64,
) -> Result<Option<ZeroSumWitness>, ZeroSumError> {
    find_zero_sum_subsequence_capped(seq, r, DEFAULT_DP_CELL_CAP)
}

pub fn find_zero_sum_subsequence_capped(
    seq: &GSequence,
    r: u64,
    cell_cap: u64,
) -> Result<Option<ZeroSumWitness>, ZeroSumError> {
    if r == 0 {
        return Err(ZeroSumError::ZeroLength);
    }
    if seq.len() < r {
        return Ok(None);
    }
    let spec = seq.spec();
    let arith = IndexArith::new(spec, DEFAULT_ELEMENT_CAP)?;
    let n = arith.order();
    let rr = r as usize;
    let elems: Vec<(&GroupElement, usize, usize)> = seq
        .mults()
        .iter()
        .map(|(x, &c)| (x, spec.index_of(x) as usize, (c as usize).min(rr)))
        .collect();
    let cells = (elems.len() as u128 + 1) * (rr as u128 + 1) * n as u128;
    if cells > cell_cap as u128 {
        return Err(ZeroSumError::TableTooLarge { cells, cap: cell_cap });
    }

    // layers[i][j]: sums reachable with j copies drawn from the first i elements.
    let mut layers: Vec<Vec<FixedBitSet>> = Vec::with_capacity(elems.len() + 1);
    let mut base = vec![FixedBitSet::with_capacity(n); rr + 1];
    base[0].insert(0);
    layers.push(base);
    for &(_, x, cap) in &elems {
        let prev = layers.last().unwrap();
        let mut next = prev.clone();
        let mut offset = 0usize;
        for c in 1..=cap {
            offset = arith.add(offset, x);
            for j in (c..=rr).rev() {
                shifted_into(&mut next[j], &prev[j - c], offset, &arith);
            }
        }
        layers.push(next);
    }
    if !layers.last().unwrap()[rr].contains(0) {
        return Ok(None);
    }

    let mut picks = BTreeMap::new();
    let mut j = rr;
    let mut g = 0usize;
    for i in (1..=elems.len()).rev() {
        let (elem, x, cap) = elems[i - 1];
        let neg_x = arith.neg(x);
        let mut back = g;
        let mut chosen = None;
        for c in 0..=cap.min(j) {
            if layers[i - 1][j - c].contains(back) {
                chosen = Some(c);
                break;
            }
            back = arith.add(back, neg_x);
        }
        let c = chosen.expect("reachability layers are inconsistent");
        if c > 0 {
            picks.insert(elem.clone(), c as u32);
        }
        j -= c;
        g = back;
    }
    debug_assert_eq!((j, g), (0, 0));
    Ok(Some(ZeroSumWitness { target_r: r, picks }))
}

/// Checks that no `r` distinct elements of `set` sum to the identity.
pub fn is_zero_free_set(
    spec: &GroupSpec,
    set: &[GroupElement],
    r: u64,
) -> Result<ZeroFreeCheck, ZeroSumError> {
    let mut seq = GSequence::new(spec.clone());
    for x in set {
        if seq.multiplicity(x) > 0 {
            return Err(ZeroSumError::Duplicate(x.to_string()));
        }
        seq.push(x.clone(), 1)?;
    }
    Ok(match find_zero_sum_subsequence(&seq, r)? {
        None => ZeroFreeCheck { zero_free: true, violation: None },
        Some(w) => ZeroFreeCheck {
            zero_free: false,
            violation: Some(w.picks.into_keys().collect()),
        },
    })
}

/// Two distinct pairs with equal sums, if any.
pub fn sidon_collision(
    spec: &GroupSpec,
    set: &[GroupElement],
) -> Option<((GroupElement, GroupElement), (GroupElement, GroupElement))> {
    let mut seen: HashMap<GroupElement, (usize, usize)> = HashMap::new();
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let s = spec.add(&set[i], &set[j]);
            if let Some(&(a, b)) = seen.get(&s) {
                return Some(((set[a].clone(), set[b].clone()), (set[i].clone(), set[j].clone())));
            }
            seen.insert(s, (i, j));
        }
    }
    None
}

/// True iff all sums of two distinct elements are pairwise different.
pub fn is_sidon_set(spec: &GroupSpec, set: &[GroupElement]) -> bool {
    sidon_collision(spec, set).is_none()
}

//! Finite abelian groups presented as products of cyclic groups.
//!
//! Elements are enumerated in mixed-radix lexicographic order with the first
//! coordinate most significant. That order is the canonical search order used
//! by every solver, and the element's position in it is its *index*. For
//! `Z2^d` with `d <= 64` the index doubles as the packed bit encoding, so
//! addition is a single XOR.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Default cap on `|G|` for anything that enumerates the whole group.
pub const DEFAULT_ELEMENT_CAP: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GroupSpec {
    moduli: Vec<u32>,
    order: u128,
    exponent: u64,
}

/// Largest supported group order; keeps every index inside a `u64`.
pub const MAX_GROUP_ORDER: u128 = 1 << 64;

/// An element of a [`GroupSpec`], stored as residues.
///
/// Equality, ordering and hashing only look at the coordinates; the packed
/// word is a cache for the `Z2^d` fast path.
#[derive(Clone, Debug)]
pub struct GroupElement {
    coords: Vec<u32>,
    packed: Option<u64>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    /// Lexicographic on coordinates, which agrees with index order for
    /// elements of the same group.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    /// Packed bit encoding, present only for elements of `Z2^d`, `d <= 64`.
    pub fn packed(&self) -> Option<u64> {
        self.packed
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn pack_bits(coords: &[u32]) -> u64 {
    coords.iter().fold(0u64, |acc, &c| (acc << 1) | c as u64)
}

impl GroupSpec {
    pub fn new(moduli: Vec<u32>) -> Result<Self, AlgebraError> {
        if moduli.is_empty() {
            return Err(AlgebraError::EmptyGroup);
        }
        let mut order = 1u128;
        let mut exponent = 1u64;
        for &m in &moduli {
            if m < 2 {
                return Err(AlgebraError::Modulus(m));
            }
            order = order
                .checked_mul(m as u128)
                .filter(|&o| o <= MAX_GROUP_ORDER)
                .ok_or(AlgebraError::OrderOverflow)?;
            exponent = exponent.lcm(&(m as u64));
        }
        Ok(GroupSpec { moduli, order, exponent })
    }

    pub fn cyclic(m: u32) -> Result<Self, AlgebraError> {
        Self::new(vec![m])
    }

    /// `Z_m^d`.
    pub fn power(m: u32, d: usize) -> Result<Self, AlgebraError> {
        Self::new(vec![m; d])
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// `|G|`; at most `2^64`.
    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// True for `Z2^d`.
    pub fn is_elementary_two(&self) -> bool {
        self.moduli.iter().all(|&m| m == 2)
    }

    pub fn has_uniform_moduli(&self) -> bool {
        self.moduli.windows(2).all(|w| w[0] == w[1])
    }

    fn packs(&self) -> bool {
        self.is_elementary_two() && self.rank() <= 64
    }

    fn make(&self, coords: Vec<u32>) -> GroupElement {
        let packed = self.packs().then(|| pack_bits(&coords));
        GroupElement { coords, packed }
    }

    pub fn identity(&self) -> GroupElement {
        self.make(vec![0; self.rank()])
    }

    pub fn element(&self, coords: Vec<u32>) -> Result<GroupElement, AlgebraError> {
        self.check_coords(&coords)?;
        Ok(self.make(coords))
    }

    /// Builds a `Z2^d` element from its packed encoding (coordinate 0 is the
    /// most significant bit).
    pub fn from_packed(&self, bits: u64) -> Result<GroupElement, AlgebraError> {
        if !self.packs() {
            return Err(AlgebraError::NotPacked(self.to_string()));
        }
        let d = self.rank();
        if d < 64 && bits >> d != 0 {
            return Err(AlgebraError::PackedRange { bits, d });
        }
        let coords = (0..d).map(|i| ((bits >> (d - 1 - i)) & 1) as u32).collect();
        Ok(GroupElement { coords, packed: Some(bits) })
    }

    fn check_coords(&self, coords: &[u32]) -> Result<(), AlgebraError> {
        if coords.len() != self.rank() {
            return Err(AlgebraError::Arity { expected: self.rank(), got: coords.len() });
        }
        for (i, (&c, &m)) in coords.iter().zip(&self.moduli).enumerate() {
            if c >= m {
                return Err(AlgebraError::Residue { coord: i, value: c, modulus: m });
            }
        }
        Ok(())
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        self.check_coords(&a.coords).is_ok()
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        debug_assert!(self.contains(a) && self.contains(b));
        if let (Some(x), Some(y)) = (a.packed, b.packed) {
            let bits = x ^ y;
            let d = self.rank();
            let coords = (0..d).map(|i| ((bits >> (d - 1 - i)) & 1) as u32).collect();
            return GroupElement { coords, packed: Some(bits) };
        }
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.moduli)
            .map(|((&x, &y), &m)| ((x as u64 + y as u64) % m as u64) as u32)
            .collect();
        self.make(coords)
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        if a.packed.is_some() {
            return a.clone();
        }
        let coords = a
            .coords
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| if x == 0 { 0 } else { m - x })
            .collect();
        self.make(coords)
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a GroupElement>) -> GroupElement {
        items.into_iter().fold(self.identity(), |acc, x| self.add(&acc, x))
    }

    /// `c * a`.
    pub fn scale(&self, a: &GroupElement, c: u64) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| ((x as u64 * (c % m as u64)) % m as u64) as u32)
            .collect();
        self.make(coords)
    }

    /// Position of `a` in enumeration order.
    pub fn index_of(&self, a: &GroupElement) -> u64 {
        if let Some(bits) = a.packed {
            return bits;
        }
        a.coords
            .iter()
            .zip(&self.moduli)
            .fold(0u64, |acc, (&c, &m)| acc * m as u64 + c as u64)
    }

    pub fn element_at(&self, index: u64) -> Result<GroupElement, AlgebraError> {
        if index as u128 >= self.order {
            return Err(AlgebraError::IndexRange { index, order: self.order });
        }
        let mut rest = index;
        let mut coords = vec![0u32; self.rank()];
        for (slot, &m) in coords.iter_mut().zip(&self.moduli).rev() {
            *slot = (rest % m as u64) as u32;
            rest /= m as u64;
        }
        Ok(self.make(coords))
    }

    /// All elements in mixed-radix lexicographic order, guarded by
    /// [`DEFAULT_ELEMENT_CAP`].
    pub fn elements(&self) -> Result<Elements<'_>, AlgebraError> {
        self.elements_capped(DEFAULT_ELEMENT_CAP)
    }

    pub fn elements_capped(&self, cap: u64) -> Result<Elements<'_>, AlgebraError> {
        self.check_cap(cap)?;
        Ok(Elements { spec: self, next: 0 })
    }

    pub fn check_cap(&self, cap: u64) -> Result<(), AlgebraError> {
        if self.order > cap as u128 {
            return Err(AlgebraError::TooLarge { order: self.order, cap });
        }
        Ok(())
    }

    /// The additive order of `a`.
    pub fn element_order(&self, a: &GroupElement) -> u64 {
        a.coords
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| m as u64 / (x as u64).gcd(&(m as u64)))
            .fold(1u64, |acc, o| acc.lcm(&o))
    }
}

pub struct Elements<'a> {
    spec: &'a GroupSpec,
    next: u64,
}

impl Iterator for Elements<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        if self.next as u128 >= self.spec.order {
            return None;
        }
        let e = self.spec.element_at(self.next).ok();
        self.next += 1;
        e
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.spec.order - self.next as u128) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Elements<'_> {}

pub fn group_add(spec: &GroupSpec, a: &GroupElement, b: &GroupElement) -> GroupElement {
    spec.add(a, b)
}

pub fn group_neg(spec: &GroupSpec, a: &GroupElement) -> GroupElement {
    spec.neg(a)
}

pub fn enumerate_elements(spec: &GroupSpec) -> Result<Elements<'_>, AlgebraError> {
    spec.elements()
}

impl fmt::Display for GroupSpec {
    /// Canonical text form: runs of equal moduli collapse to `Zm^e`,
    /// factors are joined with `x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.moduli.len() {
            let m = self.moduli[i];
            let run = self.moduli[i..].iter().take_while(|&&x| x == m).count();
            if !first {
                f.write_str("x")?;
            }
            first = false;
            if run == 1 {
                write!(f, "Z{m}")?;
            } else {
                write!(f, "Z{m}^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = AlgebraError;

    /// Accepts `Z2^5`, `Z3^2`, `Z2xZ4`, `Z2^2 x Z3` and `×` as separator.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AlgebraError::Parse(format!("bad group spec {s:?}"));
        let normalized = s.replace(['×', '*'], "x");
        let mut moduli = Vec::new();
        for factor in normalized.split(['x', 'X']) {
            let factor = factor.trim();
            let body = factor.strip_prefix(['Z', 'z']).ok_or_else(bad)?;
            let (m, e) = match body.split_once('^') {
                Some((m, e)) => (m, e.trim().parse::<usize>().map_err(|_| bad())?),
                None => (body, 1),
            };
            let m = m.trim().parse::<u32>().map_err(|_| bad())?;
            if e == 0 {
                return Err(bad());
            }
            moduli.extend(std::iter::repeat_n(m, e));
        }
        GroupSpec::new(moduli)
    }
}

impl TryFrom<String> for GroupSpec {
    type Error = AlgebraError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GroupSpec> for String {
    fn from(g: GroupSpec) -> String {
        g.to_string()
    }
}

/// Index-level arithmetic for search loops.
///
/// Works on element indices rather than [`GroupElement`] values; `Z2^d`
/// uses XOR, small groups use a precomputed table, everything else decodes
/// digits on the fly.
#[derive(Clone, Debug)]
pub struct IndexArith {
    order: usize,
    moduli: Vec<u32>,
    kind: ArithKind,
}

#[derive(Clone, Debug)]
enum ArithKind {
    Xor,
    Table(Vec<u32>),
    Digits,
}

const TABLE_MAX_ORDER: usize = 1024;

impl IndexArith {
    pub fn new(spec: &GroupSpec, cap: u64) -> Result<Self, AlgebraError> {
        spec.check_cap(cap)?;
        let order = spec.order() as usize;
        let moduli = spec.moduli().to_vec();
        let mut arith = IndexArith { order, moduli, kind: ArithKind::Digits };
        if spec.is_elementary_two() {
            arith.kind = ArithKind::Xor;
        } else if order <= TABLE_MAX_ORDER {
            let mut table = vec![0u32; order * order];
            for a in 0..order {
                for b in 0..order {
                    table[a * order + b] = arith.add_digits(a, b) as u32;
                }
            }
            arith.kind = ArithKind::Table(table);
        }
        Ok(arith)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn add_digits(&self, mut a: usize, mut b: usize) -> usize {
        let mut out = 0usize;
        let mut place = 1usize;
        for &m in self.moduli.iter().rev() {
            let m = m as usize;
            let digit = (a % m + b % m) % m;
            out += digit * place;
            place *= m;
            a /= m;
            b /= m;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.kind {
            ArithKind::Xor => a ^ b,
            ArithKind::Table(t) => t[a * self.order + b] as usize,
            ArithKind::Digits => self.add_digits(a, b),
        }
    }

    pub fn neg(&self, a: usize) -> usize {
        match self.kind {
            ArithKind::Xor => a,
            _ => {
                let mut rest = a;
                let mut out = 0usize;
                let mut place = 1usize;
                for &m in self.moduli.iter().rev() {
                    let m = m as usize;
                    let digit = rest % m;
                    out += ((m - digit) % m) * place;
                    place *= m;
                    rest /= m;
                }
                out
            }
        }
    }

    /// Whether the coordinates of `a` are non-decreasing, i.e. `a` is the
    /// least element of its orbit under coordinate permutations.
    pub fn is_sorted_coords(&self, a: usize) -> bool {
        let mut rest = a;
        let mut prev = u32::MAX;
        for &m in self.moduli.iter().rev() {
            let digit = (rest % m as usize) as u32;
            if digit > prev {
                return false;
            }
            prev = digit;
            rest /= m as usize;
        }
        true
    }
}

//! Binary extension fields GF(2^k) in polynomial basis.
//!
//! Elements are stored little-endian: bit `i` is the coefficient of `x^i`.
//! Multiplication is a carry-less product followed by reduction modulo the
//! context's irreducible polynomial.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Largest supported extension degree. Irreducibility is checked by trial
/// division, which costs about `2^(k/2)` polynomial remainders.
pub const MAX_FIELD_DEGREE: u32 = 32;

/// Lexicographically least irreducible polynomial of each degree 1..=16,
/// including the leading term.
pub const DEFAULT_MODULI: [u64; 16] = [
    0x2,     // x
    0x7,     // x^2 + x + 1
    0xb,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x83,    // x^7 + x + 1
    0x11b,   // x^8 + x^4 + x^3 + x + 1
    0x203,   // x^9 + x + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1009,  // x^12 + x^3 + 1
    0x201b,  // x^13 + x^4 + x^3 + x + 1
    0x4021,  // x^14 + x^5 + 1
    0x8003,  // x^15 + x + 1
    0x1002b, // x^16 + x^5 + x^3 + x + 1
];

/// Carry-less product of two polynomials over GF(2).
pub fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let wide = a as u128;
    let mut rest = b;
    while rest != 0 {
        let i = rest.trailing_zeros();
        acc ^= wide << i;
        rest &= rest - 1;
    }
    acc
}

fn degree(p: u128) -> Option<u32> {
    (p != 0).then(|| 127 - p.leading_zeros())
}

/// Remainder of `a` modulo `m` over GF(2). `m` must be non-zero.
pub fn poly_rem(mut a: u128, m: u128) -> u128 {
    let dm = degree(m).expect("division by the zero polynomial");
    while let Some(da) = degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

/// Trial division against every polynomial of degree 1..=deg/2.
pub fn is_irreducible(poly: u64) -> bool {
    let Some(deg) = degree(poly as u128) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    let max_div_deg = deg / 2;
    for d in 1..=max_div_deg {
        for low in 0..(1u64 << d) {
            let divisor = (1u64 << d) | low;
            if poly_rem(poly as u128, divisor as u128) == 0 {
                return false;
            }
        }
    }
    true
}

/// The lexicographically least irreducible polynomial of degree `k`.
pub fn least_irreducible(k: u32) -> Option<u64> {
    if k == 0 || k > MAX_FIELD_DEGREE {
        return None;
    }
    if let Some(&m) = DEFAULT_MODULI.get(k as usize - 1) {
        return Some(m);
    }
    let top = 1u64 << k;
    (0..top).map(|low| top | low).find(|&p| is_irreducible(p))
}

/// Arithmetic context for GF(2^k) with a fixed irreducible modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldContext {
    k: u32,
    modulus: u64,
}

/// An element of GF(2^k); only meaningful together with its [`FieldContext`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl FieldContext {
    /// Field of degree `k` using the default (least irreducible) modulus.
    pub fn new(k: u32) -> Result<Self, AlgebraError> {
        let modulus = least_irreducible(k).ok_or(AlgebraError::FieldDegree(k))?;
        Ok(FieldContext { k, modulus })
    }

    /// Field with an explicit modulus, given with its leading bit set.
    pub fn with_modulus(k: u32, modulus: u64) -> Result<Self, AlgebraError> {
        if k == 0 || k > MAX_FIELD_DEGREE {
            return Err(AlgebraError::FieldDegree(k));
        }
        if degree(modulus as u128) != Some(k) {
            return Err(AlgebraError::ModulusDegree { k, modulus });
        }
        if !is_irreducible(modulus) {
            return Err(AlgebraError::Reducible(modulus));
        }
        Ok(FieldContext { k, modulus })
    }

    /// Parses a hex-encoded modulus such as `0x13` or `13`.
    pub fn with_hex_modulus(k: u32, hex: &str) -> Result<Self, AlgebraError> {
        let digits = hex.trim().trim_start_matches("0x").trim_start_matches("0X");
        let modulus = u64::from_str_radix(digits, 16)
            .map_err(|_| AlgebraError::Parse(format!("bad hex modulus {hex:?}")))?;
        Self::with_modulus(k, modulus)
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1u64 << self.k
    }

    fn mask(&self) -> u64 {
        (1u64 << self.k) - 1
    }

    pub fn element(&self, bits: u64) -> Result<FieldElement, AlgebraError> {
        if bits & !self.mask() != 0 {
            return Err(AlgebraError::FieldElementRange { bits, k: self.k });
        }
        Ok(FieldElement(bits))
    }

    /// All field elements in increasing bit-pattern order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let product = clmul(a.0, b.0);
        FieldElement(poly_rem(product, self.modulus as u128) as u64)
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// `a^e` by square-and-multiply. `0^0` is `1`, so the moment-curve
    /// point at `x = 0` is the zero vector.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(2^k - 2)`.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        (!a.is_zero()).then(|| self.pow(a, self.order() - 2))
    }
}

pub fn field_mul(ctx: &FieldContext, a: FieldElement, b: FieldElement) -> FieldElement {
    ctx.mul(a, b)
}

pub fn field_pow(ctx: &FieldContext, a: FieldElement, e: u64) -> FieldElement {
    ctx.pow(a, e)
}

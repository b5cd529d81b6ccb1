//! Closed-form bound calculators.
//!
//! Everything with a floor is evaluated in exact integer arithmetic; the
//! real-valued outputs carry the expression they approximate.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::ConstructError;

/// Largest `d` accepted by the integer-exact calculators (`2^(d+3)` must fit
/// in a `u128`).
pub const MAX_BOUND_DIM: u32 = 120;

/// A floating-point value together with the exact expression it evaluates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealBound {
    pub value: f64,
    pub expression: String,
    /// Double precision; roughly this many significant decimal digits.
    pub significant_digits: u32,
}

impl RealBound {
    fn new(value: f64, expression: String) -> Self {
        RealBound { value, expression, significant_digits: 15 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SidonUpperBound {
    pub d: u32,
    pub real: RealBound,
    /// `floor(sqrt(2^(d+1) - 7/4) + 1/2)`, computed exactly.
    pub floor: u64,
}

fn check_dim(d: u32) -> Result<(), ConstructError> {
    if d == 0 || d > MAX_BOUND_DIM {
        return Err(ConstructError::Range(format!("d = {d} outside 1..={MAX_BOUND_DIM}")));
    }
    Ok(())
}

/// `isqrt(2^(d+3) - 7)`, the integer square root of `4 * (2^(d+1) - 7/4)`.
fn scaled_root(d: u32) -> u128 {
    ((1u128 << (d + 3)) - 7).sqrt()
}

/// Upper bound on the size of a Sidon set in `Z2^d`.
pub fn sidon_upper_bound(d: u32) -> Result<SidonUpperBound, ConstructError> {
    check_dim(d)?;
    let f = scaled_root(d);
    let value = (2f64.powi(d as i32 + 1) - 1.75).sqrt() + 0.5;
    Ok(SidonUpperBound {
        d,
        real: RealBound::new(value, format!("sqrt(2^{} - 7/4) + 1/2", d + 1)),
        // floor((s + 1) / 2) where s = sqrt(M) only depends on isqrt(M).
        floor: f.div_ceil(2) as u64,
    })
}

/// `b_d = floor(sqrt(2^(d+1) - 7/4) - 1/2)`.
pub fn b_d(d: u32) -> Result<u64, ConstructError> {
    check_dim(d)?;
    Ok(((scaled_root(d) - 1) / 2) as u64)
}

/// `floor(sqrt(2^(d+1) - 7/4) + 7/2)`, the resulting upper bound on
/// `s_4(Z2^d)`; equals `b_d + 4`.
pub fn s4_upper_bound(d: u32) -> Result<u64, ConstructError> {
    check_dim(d)?;
    Ok(((scaled_root(d) + 7) / 2) as u64)
}

/// `(3/8) * cbrt(207 + 33 sqrt(33))`.
pub fn eta() -> RealBound {
    let v = 0.375 * (207.0 + 33.0 * 33f64.sqrt()).cbrt();
    RealBound::new(v, "(3/8) * cbrt(207 + 33*sqrt(33))".into())
}

/// `2 eta^d + 1`, an upper bound on `s(Z3^d)`.
pub fn z3_egz_upper(d: u32) -> Result<RealBound, ConstructError> {
    if d == 0 {
        return Err(ConstructError::Range("d must be at least 1".into()));
    }
    let e = eta().value;
    Ok(RealBound::new(2.0 * e.powi(d as i32) + 1.0, format!("2 * eta^{d} + 1")))
}

/// The `q(r)`, `lambda_r`, `N_r` recurrence and the constant
/// `C_m = (m! N_m)^(1/m)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmTable {
    pub m: u32,
    /// `q[i]` is `q(i + 2)`.
    pub q: Vec<u64>,
    /// `lambda[i]` is `lambda_(i + 2)`.
    pub lambda: Vec<u64>,
    /// `n[i]` is `N_(i + 1)`.
    #[serde(serialize_with = "ser_big_vec")]
    pub n: Vec<BigUint>,
    /// `m! * N_m`, so that `C_m` is its `m`-th root.
    #[serde(serialize_with = "ser_big")]
    pub c_m_power: BigUint,
    pub c_m: RealBound,
    /// `r * lambda_r < 2 (m + r^2)` for every `r`.
    pub lambda_estimate_holds: bool,
    /// `m! N_m < m! prod r lambda_r < m! prod 2 (m + r^2)`.
    pub product_estimate_holds: bool,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_big_vec<S: serde::Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl CmTable {
    pub fn q_of(&self, r: u32) -> u64 {
        self.q[(r - 2) as usize]
    }

    pub fn lambda_of(&self, r: u32) -> u64 {
        self.lambda[(r - 2) as usize]
    }

    pub fn n_of(&self, r: u32) -> &BigUint {
        &self.n[(r - 1) as usize]
    }
}

fn ln_big(x: &BigUint) -> f64 {
    if let Some(v) = x.to_f64().filter(|v| v.is_finite()) {
        return v.ln();
    }
    let bits = x.bits();
    let shift = bits - 60;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn cm_constant(m: u32) -> Result<CmTable, ConstructError> {
    if m < 2 {
        return Err(ConstructError::Range("m must be at least 2".into()));
    }
    let mm = m as u64;
    let mut q = Vec::new();
    let mut lambda = Vec::new();
    let mut n = vec![BigUint::one()];
    let mut lambda_ok = true;
    let mut prod_r_lambda = BigUint::one();
    let mut prod_coarse = BigUint::one();
    for r in 2..=mm {
        let qr = (r - mm % r) % r;
        let lr = if qr > 0 { 2 * (mm + qr) / r + 2 * r - qr - 3 } else { 2 * mm / r - 1 };
        lambda_ok &= r * lr < 2 * (mm + r * r);
        prod_r_lambda *= r * lr;
        prod_coarse *= 2 * (mm + r * r);
        let prev = n.last().unwrap().clone();
        // N_r = lambda_r (1 + r (N_{r-1} - 1))
        let next = BigUint::from(lr) * (BigUint::one() + BigUint::from(r) * (prev - 1u32));
        q.push(qr);
        lambda.push(lr);
        n.push(next);
    }
    let factorial: BigUint = (1..=mm).map(BigUint::from).product();
    let n_m = n.last().unwrap().clone();
    let c_m_power = &factorial * &n_m;
    let product_ok = n_m < prod_r_lambda && prod_r_lambda < prod_coarse;
    let c_m = (ln_big(&c_m_power) / m as f64).exp();
    Ok(CmTable {
        m,
        q,
        lambda,
        n,
        c_m: RealBound::new(c_m, format!("{c_m_power}^(1/{m})")),
        c_m_power,
        lambda_estimate_holds: lambda_ok,
        product_estimate_holds: product_ok,
    })
}

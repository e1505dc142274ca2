//! Prime-field arithmetic and primality validation.
//!
//! Every residue lives in `u64` and products are formed in `u128`, so any
//! prime below the cap is safe regardless of the intermediate values.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest accepted modulus (2^31 - 1).
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is too small: the modulus must be an odd prime >= 3")]
    TooSmall(u64),
    #[error("{0} is even: the modulus must be an odd prime")]
    Even(u64),
    #[error("{0} is composite")]
    Composite(u64),
    #[error("{0} exceeds the supported modulus cap {MAX_PRIME}")]
    TooLarge(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// A validated odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    /// Validates `candidate` as an odd prime no larger than [`MAX_PRIME`].
    pub fn new(candidate: u64) -> Result<Self, ArithError> {
        if candidate < 3 {
            return Err(ArithError::TooSmall(candidate));
        }
        if candidate.is_multiple_of(2) {
            return Err(ArithError::Even(candidate));
        }
        if !is_prime_u64(candidate) {
            return Err(ArithError::Composite(candidate));
        }
        if candidate > MAX_PRIME {
            return Err(ArithError::TooLarge(candidate));
        }
        Ok(Prime(candidate))
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    /// Number of vertices `p^2` of the graph over this field.
    #[inline]
    pub fn square(self) -> usize {
        (self.0 * self.0) as usize
    }

    #[inline]
    pub fn element(self, value: u64) -> FieldElement {
        FieldElement::new(value, self)
    }

    /// Odd primes in `lo..=hi`, ascending.
    pub fn range(lo: u64, hi: u64) -> Vec<Prime> {
        (lo.max(3)..=hi.min(MAX_PRIME))
            .filter_map(|c| Prime::new(c).ok())
            .collect()
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = u64::deserialize(d)?;
        Prime::new(raw).map_err(serde::de::Error::custom)
    }
}

/// `validate_prime` under its operation name.
pub fn validate_prime(candidate: u64) -> Result<Prime, ArithError> {
    Prime::new(candidate)
}

/// A residue modulo a [`Prime`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    residue: u64,
    modulus: Prime,
}

impl FieldElement {
    /// Reduces `value` into `[0, p)`.
    #[inline]
    pub fn new(value: u64, modulus: Prime) -> Self {
        Self {
            residue: value % modulus.0,
            modulus,
        }
    }

    #[inline]
    pub fn residue(self) -> u64 {
        self.residue
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    fn same_field(self, other: Self) -> Result<u64, ArithError> {
        if self.modulus != other.modulus {
            return Err(ArithError::ModulusMismatch(
                self.modulus.0,
                other.modulus.0,
            ));
        }
        Ok(self.modulus.0)
    }

    pub fn try_add(self, other: Self) -> Result<Self, ArithError> {
        let p = self.same_field(other)?;
        Ok(Self {
            residue: add_raw(self.residue, other.residue, p),
            modulus: self.modulus,
        })
    }

    pub fn try_sub(self, other: Self) -> Result<Self, ArithError> {
        let p = self.same_field(other)?;
        Ok(Self {
            residue: sub_raw(self.residue, other.residue, p),
            modulus: self.modulus,
        })
    }

    pub fn try_mul(self, other: Self) -> Result<Self, ArithError> {
        let p = self.same_field(other)?;
        Ok(Self {
            residue: mul_raw(self.residue, other.residue, p),
            modulus: self.modulus,
        })
    }

    pub fn square(self) -> Self {
        Self {
            residue: mul_raw(self.residue, self.residue, self.modulus.0),
            modulus: self.modulus,
        }
    }

    pub fn inverse(self) -> Result<Self, ArithError> {
        let residue = inv_raw(self.residue, self.modulus.0).ok_or(ArithError::ZeroInverse)?;
        Ok(Self {
            residue,
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

pub fn add_mod(a: FieldElement, b: FieldElement) -> Result<FieldElement, ArithError> {
    a.try_add(b)
}

pub fn sqr_mod(a: FieldElement) -> FieldElement {
    a.square()
}

pub fn inv_mod(a: FieldElement) -> Result<FieldElement, ArithError> {
    a.inverse()
}

// Raw helpers on reduced residues; callers guarantee `a, b < p`.

#[inline]
pub(crate) fn add_raw(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_raw(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn mul_raw(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_raw(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_raw(acc, base, p);
        }
        base = mul_raw(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse via Fermat's little theorem; `None` for zero.
#[inline]
pub(crate) fn inv_raw(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(pow_raw(a, p - 2, p))
    }
}

/// Deterministic Miller-Rabin, exact for every `u64`.
///
/// The first twelve primes as witnesses suffice below 3.3 * 10^24.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_raw(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_raw(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

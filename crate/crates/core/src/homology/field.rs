use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::HomologyError;

/// Coefficient field for homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Gf2,
    /// Integers modulo an odd prime.
    Gfp(u32),
    Rational,
}

/// The prime used as a stand-in for the rationals.
pub const PROXY_PRIME: u32 = 65521;

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// `GF(p)` for an odd prime `p`; `p = 2` gives [`FieldSpec::Gf2`].
    pub fn gfp(p: u32) -> Result<Self, HomologyError> {
        if p == 2 {
            return Ok(FieldSpec::Gf2);
        }
        if !is_prime(p) || p > 1 << 31 {
            return Err(HomologyError::NotPrime(p));
        }
        Ok(FieldSpec::Gfp(p))
    }

    pub fn characteristic(&self) -> u32 {
        match *self {
            FieldSpec::Gf2 => 2,
            FieldSpec::Gfp(p) => p,
            FieldSpec::Rational => 0,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Gf2 => write!(f, "gf2"),
            FieldSpec::Gfp(p) => write!(f, "gf{p}"),
            FieldSpec::Rational => write!(f, "rational"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = HomologyError;

    /// Accepts `gf2`, `gfP` / `gfp:P` for a prime `P`, and `rational` / `q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if t == "rational" || t == "q" {
            return Ok(FieldSpec::Rational);
        }
        let digits = t
            .strip_prefix("gfp:")
            .or_else(|| t.strip_prefix("gf"))
            .ok_or_else(|| HomologyError::UnknownField(s.to_string()))?;
        let p: u32 = digits.parse().map_err(|_| HomologyError::UnknownField(s.to_string()))?;
        FieldSpec::gfp(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Arithmetic in a coefficient field.
pub trait Field: Sync {
    type E: Clone + PartialEq + Send + Sync + fmt::Debug;

    fn zero(&self) -> Self::E;
    fn from_sign(&self, s: i8) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;

    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }
}

pub struct Gf2;

impl Field for Gf2 {
    type E = u8;

    fn zero(&self) -> u8 {
        0
    }
    fn from_sign(&self, _s: i8) -> u8 {
        1
    }
    fn is_zero(&self, a: &u8) -> bool {
        *a == 0
    }
    fn add(&self, a: &u8, b: &u8) -> u8 {
        a ^ b
    }
    fn mul(&self, a: &u8, b: &u8) -> u8 {
        a & b
    }
    fn neg(&self, a: &u8) -> u8 {
        *a
    }
    fn inv(&self, a: &u8) -> u8 {
        debug_assert_eq!(*a, 1);
        1
    }
}

pub struct Gfp(pub u32);

impl Field for Gfp {
    type E = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn from_sign(&self, s: i8) -> u32 {
        if s >= 0 {
            1
        } else {
            self.0 - 1
        }
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.0 as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.0 as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        // Fermat: a^(p-2).
        let p = self.0 as u64;
        let (mut base, mut exp, mut acc) = (*a as u64 % p, p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc as u32
    }
}

pub struct Rationals;

impl Field for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn from_sign(&self, s: i8) -> BigRational {
        BigRational::from_integer(BigInt::from(s))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        debug_assert!(!a.is_zero());
        if a.is_negative() {
            -(BigRational::one() / a.abs())
        } else {
            BigRational::one() / a
        }
    }
}

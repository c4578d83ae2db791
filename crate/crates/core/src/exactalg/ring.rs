use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact scalar. Over `Z` and `Z/p` the denominator is always one; over `Z/p`
/// the numerator is the reduced residue in `0..p`.
pub type Scalar = BigRational;

/// Coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingSpec {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl RingSpec {
    /// `Z/p`, rejecting composite `p`.
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(RingSpec::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, RingSpec::Integers)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            RingSpec::PrimeField(p) => p,
            _ => 0,
        }
    }

    /// Brings an arbitrary rational into canonical form for this ring.
    pub fn element(self, value: Scalar) -> Result<Scalar> {
        match self {
            RingSpec::Rationals => Ok(value),
            RingSpec::Integers => {
                if value.is_integer() {
                    Ok(value)
                } else {
                    Err(Error::NotInRing { value: value.to_string(), ring: self })
                }
            }
            RingSpec::PrimeField(p) => {
                let p = BigInt::from(p);
                let den = value.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::NotInRing { value: value.to_string(), ring: self });
                }
                let inv = mod_inverse(&den, &p).expect("nonzero residue mod a prime");
                Ok(Scalar::from_integer((value.numer() * inv).mod_floor(&p)))
            }
        }
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        self.reduce(Scalar::from_integer(BigInt::from(v)))
    }

    pub fn zero(self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(self) -> Scalar {
        self.reduce(Scalar::one())
    }

    /// Canonical form of a value that is already known to be integral
    /// (or rational over `Q`).
    pub(crate) fn reduce(self, v: Scalar) -> Scalar {
        match self {
            RingSpec::PrimeField(p) => {
                debug_assert!(v.is_integer());
                Scalar::from_integer(v.numer().mod_floor(&BigInt::from(p)))
            }
            _ => v,
        }
    }

    pub fn add(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn sub(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a - b)
    }

    pub fn mul(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn neg(self, a: &Scalar) -> Scalar {
        self.reduce(-a)
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inv(self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self {
            RingSpec::Rationals => Some(a.recip()),
            RingSpec::Integers => {
                if a.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            RingSpec::PrimeField(p) => {
                let p = BigInt::from(p);
                mod_inverse(a.numer(), &p).map(Scalar::from_integer)
            }
        }
    }

    pub fn is_unit(self, a: &Scalar) -> bool {
        self.inv(a).is_some()
    }

    /// Euclidean quotient: `a - q*b` is smaller than `b` (zero over a field).
    pub(crate) fn quotient(self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            RingSpec::Integers => Scalar::from_integer(a.numer().div_floor(b.numer())),
            _ => self.mul(a, &self.inv(b).expect("nonzero divisor over a field")),
        }
    }

    /// Size used for pivot selection during elimination.
    pub(crate) fn size(self, a: &Scalar) -> BigInt {
        match self {
            RingSpec::Integers => a.numer().abs(),
            // Every nonzero element of a field is a unit; prefer nothing.
            _ => {
                if a.is_zero() {
                    BigInt::zero()
                } else {
                    BigInt::one()
                }
            }
        }
    }

    pub(crate) fn divides(self, a: &Scalar, b: &Scalar) -> bool {
        match self {
            RingSpec::Integers => {
                if a.is_zero() {
                    b.is_zero()
                } else {
                    (b.numer() % a.numer()).is_zero()
                }
            }
            _ => !a.is_zero() || b.is_zero(),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => f.write_str("Z"),
            RingSpec::Rationals => f.write_str("Q"),
            RingSpec::PrimeField(p) => write!(f, "Z/{p}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Z" | "ZZ" => Ok(RingSpec::Integers),
            "Q" | "QQ" => Ok(RingSpec::Rationals),
            other => {
                let p = other
                    .strip_prefix("Z/")
                    .or_else(|| other.strip_prefix("F"))
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown ring {other:?}")))?;
                RingSpec::prime_field(p)
            }
        }
    }
}

impl Serialize for RingSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RingSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(p).extended_gcd(p);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(p))
    } else {
        None
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &WITNESSES {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

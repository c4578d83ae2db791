use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::ring::RingSpec;
use super::smith::{invariant_factors, normalize_chain, rank};
use crate::error::{Error, Result};

/// Isomorphism class of a finitely presented module:
/// `R^free_rank ⊕ R/d_1 ⊕ ... ⊕ R/d_k` with `1 < d_1 | d_2 | ... | d_k`.
///
/// Over a field the torsion list is always empty, so the module is just its
/// dimension. Equality is equality of canonical forms, i.e. isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawModule", into = "RawModule")]
pub struct FpModule {
    ring: RingSpec,
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FpModule {
    pub fn zero(ring: RingSpec) -> Self {
        Self::free(ring, 0)
    }

    pub fn free(ring: RingSpec, rank: usize) -> Self {
        FpModule { ring, free_rank: rank, torsion: Vec::new() }
    }

    /// Canonicalizes an arbitrary list of cyclic orders. Zero orders count as
    /// free summands; unit orders are dropped.
    pub fn new(ring: RingSpec, free_rank: usize, cyclic_orders: Vec<BigInt>) -> Result<Self> {
        let mut free_rank = free_rank;
        let mut orders = Vec::new();
        for d in cyclic_orders {
            if d.is_zero() {
                free_rank += 1;
            } else if !d.abs().is_one() {
                if ring.is_field() {
                    return Err(Error::NotInRing { value: format!("torsion {d}"), ring });
                }
                orders.push(d);
            }
        }
        let torsion = normalize_chain(orders).into_iter().filter(|d| !d.is_one()).collect();
        Ok(FpModule { ring, free_rank, torsion })
    }

    pub fn cyclic(ring: RingSpec, order: u64) -> Result<Self> {
        Self::new(ring, 0, vec![BigInt::from(order)])
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Dimension over a field, or the free rank over `Z`.
    pub fn rank(&self) -> usize {
        self.free_rank
    }

    pub fn direct_sum(&self, other: &FpModule) -> Result<FpModule> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        let orders = self.torsion.iter().chain(&other.torsion).cloned().collect();
        FpModule::new(self.ring, self.free_rank + other.free_rank, orders)
    }
}

/// Cokernel of a relations matrix `R: k^a -> k^b` (a `b x a` matrix).
pub fn fp_module(presentation: &Matrix) -> FpModule {
    let ring = presentation.ring();
    let r = rank(presentation);
    let torsion = if ring.is_field() { Vec::new() } else { invariant_factors(presentation) };
    FpModule::new(ring, presentation.rows() - r, torsion).expect("invariant factors are valid orders")
}

pub fn modules_isomorphic(a: &FpModule, b: &FpModule) -> Result<bool> {
    if a.ring != b.ring {
        return Err(Error::RingMismatch(a.ring, b.ring));
    }
    Ok(a == b)
}

impl fmt::Display for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let base = match self.ring {
            RingSpec::PrimeField(p) => format!("(Z/{p})"),
            r => r.to_string(),
        };
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(base.trim_start_matches('(').trim_end_matches(')').to_string()),
            n => parts.push(format!("{base}^{n}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        f.write_str(&parts.join(" ⊕ "))
    }
}

#[derive(Serialize, Deserialize)]
struct RawModule {
    ring: RingSpec,
    free_rank: usize,
    torsion: Vec<serde_json::Value>,
}

impl From<FpModule> for RawModule {
    fn from(m: FpModule) -> Self {
        let torsion = m
            .torsion
            .iter()
            .map(|d| match d.to_u64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(d.to_string()),
            })
            .collect();
        RawModule { ring: m.ring, free_rank: m.free_rank, torsion }
    }
}

impl TryFrom<RawModule> for FpModule {
    type Error = Error;

    fn try_from(raw: RawModule) -> Result<Self> {
        let orders = raw
            .torsion
            .iter()
            .map(|v| match v {
                serde_json::Value::Number(n) => n.to_string().parse::<BigInt>().map_err(|e| Error::Parse(e.to_string())),
                serde_json::Value::String(s) => s.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string())),
                other => Err(Error::Parse(format!("bad invariant factor {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let m = FpModule::new(raw.ring, raw.free_rank, orders.clone())?;
        if m.torsion != orders {
            return Err(Error::Parse("torsion list is not a canonical divisibility chain".into()));
        }
        Ok(m)
    }
}

use super::matrix::Matrix;
use super::module::FpModule;
use super::ring::RingSpec;
use super::smith::{invariant_factors, rank};
use crate::error::{Error, Result};

/// Cochain complex `C^start -> ... -> C^end` of finite free modules.
///
/// `differentials[k]` is `δ^{start+k}: C^{start+k} -> C^{start+k+1}`, a
/// `dim C^{n+1} x dim C^n` matrix. Degrees outside the stored window are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    ring: RingSpec,
    start: i64,
    dims: Vec<usize>,
    differentials: Vec<Matrix>,
}

impl CochainComplex {
    /// Checks shapes only; `δδ = 0` is checked where cohomology is taken.
    pub fn new(ring: RingSpec, start: i64, dims: Vec<usize>, differentials: Vec<Matrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::DimensionMismatch("complex has no degrees".into()));
        }
        if differentials.len() + 1 != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.ring() != ring {
                return Err(Error::RingMismatch(ring, d.ring()));
            }
            if d.cols() != dims[k] || d.rows() != dims[k + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "δ^{} is {}x{}, expected {}x{}",
                    start + k as i64,
                    d.rows(),
                    d.cols(),
                    dims[k + 1],
                    dims[k]
                )));
            }
        }
        Ok(CochainComplex { ring, start, dims, differentials })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.start || n > self.end() {
            0
        } else {
            self.dims[(n - self.start) as usize]
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `δ^n`, or `None` where one side is the zero module.
    pub fn differential(&self, n: i64) -> Option<&Matrix> {
        if n < self.start || n >= self.end() {
            None
        } else {
            Some(&self.differentials[(n - self.start) as usize])
        }
    }

    /// Whether `δ^n ∘ δ^{n-1} = 0`.
    pub fn composes_to_zero_at(&self, n: i64) -> bool {
        match (self.differential(n - 1), self.differential(n)) {
            (Some(a), Some(b)) => (b * a).is_zero(),
            _ => true,
        }
    }

    pub fn is_complex(&self) -> bool {
        (self.start + 1..self.end()).all(|n| self.composes_to_zero_at(n))
    }

    /// `ker δ^n / im δ^{n-1}` in canonical form.
    pub fn cohomology_at(&self, n: i64) -> Result<FpModule> {
        if n < self.start || n > self.end() {
            return Err(Error::DegreeOutOfRange(n));
        }
        if !self.composes_to_zero_at(n) {
            return Err(Error::NotAComplex(n));
        }
        Ok(subquotient(self.ring, self.dim(n), self.differential(n - 1), self.differential(n)))
    }

    /// Alternating sum of cochain ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(k, &d)| if (self.start + k as i64).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum()
    }
}

/// `ker(outgoing) / im(incoming)` on a free module of rank `dim`.
///
/// The kernel of a map between free modules is a saturated sublattice, so the
/// torsion of the quotient is the torsion of `coker(incoming)`.
pub(crate) fn subquotient(ring: RingSpec, dim: usize, incoming: Option<&Matrix>, outgoing: Option<&Matrix>) -> FpModule {
    let r_out = outgoing.map_or(0, rank);
    let (r_in, torsion) = match incoming {
        None => (0, Vec::new()),
        Some(m) if ring.is_field() => (rank(m), Vec::new()),
        Some(m) => {
            let inv = invariant_factors(m);
            (inv.len(), inv)
        }
    };
    FpModule::new(ring, dim - r_out - r_in, torsion).expect("well-formed subquotient")
}

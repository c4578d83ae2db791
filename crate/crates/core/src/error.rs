use crate::exactalg::RingSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the engine.
///
/// Budget exhaustion in coset enumeration is deliberately *not* an error; it
/// is reported through [`crate::fundgroup::EnumerationStatus`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),
    #[error("value {value} is not an element of {ring}")]
    NotInRing { value: String, ring: RingSpec },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not invertible over {0}")]
    NotInvertible(RingSpec),
    #[error("degree {0} is out of range")]
    DegreeOutOfRange(i64),
    #[error("degree must be non-negative, got {0}")]
    DegreeNegative(i64),
    #[error("not a cochain complex: composite of differentials into degree {0} is nonzero")]
    NotAComplex(i64),

    #[error("no simplices given")]
    EmptyInput,
    #[error("vertex index {0} is out of range")]
    InvalidVertexIndex(usize),
    #[error("vertex {0} does not occur in any simplex")]
    UnusedVertex(usize),
    #[error("simplex {0:?} repeats a vertex")]
    DegenerateSimplex(Vec<usize>),
    #[error("complex is not connected")]
    NotConnected,
    #[error("{{{0}, {1}}} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("not a simplicial map: {0}")]
    InvalidMap(String),
    #[error("map does not send the source basepoint to the target basepoint")]
    BasepointMismatch,

    #[error("coset table is incomplete")]
    IncompleteTable,
    #[error("presentation does not match the complex and labeling")]
    PresentationMismatch,
    #[error("coset table is not for the trivial subgroup")]
    NotRegularCover,
    #[error("coset table is not for the trivial subgroup")]
    NotTrivialSubgroupTable,
    #[error("sheaf lives on a different complex than the covering base")]
    BaseMismatch,
    #[error("sheaf lives on a different complex than the covering total space")]
    TotalMismatch,

    #[error("invalid sheaf: {0}")]
    InvalidSheaf(String),
    #[error("sheaves live on different complexes")]
    ComplexMismatch,
    #[error("sheaf is not locally constant")]
    NotLocallyConstant,
    #[error("representation violates relators {0:?}")]
    InvalidRepresentation(Vec<usize>),
    #[error("homomorphism does not kill source relator {0}")]
    RelatorViolation(usize),

    #[error("cochain group of size {size} exceeds the cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("fundamental group is infinite or its enumeration exceeded the budget")]
    InfiniteOrUnknownGroup,
    #[error("operation requires field coefficients, got {0}")]
    NonFieldRing(RingSpec),

    #[error("parse error: {0}")]
    Parse(String),
}

//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {p}^{precision} does not fit the working word size")]
    ModulusTooLarge { p: u64, precision: u32 },
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("matrices live over different residue rings")]
    RingMismatch,
    #[error("column count mismatch: {left} vs {right}")]
    ColumnMismatch { left: usize, right: usize },
    #[error("vector length {got} does not match expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("cyclic factor orders must be at least 2, got {0}")]
    BadCyclicOrder(u64),
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("residue {value} is out of range for a cyclic factor of order {order}")]
    ResidueOutOfRange { value: u64, order: u64 },
    #[error("map does not define a homomorphism: generator {index} image has incompatible order")]
    NotAHomomorphism { index: usize },
    #[error("homomorphism is not surjective")]
    NotSurjective,
    #[error("kernel of the surjection is not a p-group for p = {p}")]
    KernelNotPGroup { p: u64 },
    #[error("element is not a unit")]
    NotAUnit,
    #[error("lifted element failed the unit check; the base element is not a genuine unit")]
    LiftNotUnit,
    #[error("ideal span is not closed under multiplication by the group")]
    NotAnIdeal,
    #[error("fractional ideal denominator is zero")]
    ZeroDenominator,
    #[error("element {0} does not have order 2")]
    NotAnInvolution(String),
    #[error("minus-part comparison requires an odd prime p, got p = 2")]
    EvenPrime,
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("presentation matrix has {rows} rows but target rank is {rank}")]
    RankMismatch { rows: usize, rank: usize },
    #[error("generator is not of the form g - 1")]
    NotAugmentationForm,
    #[error("generators do not span an internal direct product: group order {actual} != expected {expected}")]
    NotDirectProduct { actual: u64, expected: u64 },
    #[error("decomposition model is inconsistent: {0}")]
    BadModel(String),
    #[error("torsion subgroup has order {order}, above the enumeration bound {bound}")]
    EnumerationBound { order: u64, bound: u64 },
    #[error("generic matrices support at most {limit} block rows, got {got}")]
    GenericSizeLimit { got: usize, limit: usize },
    #[error("invalid conductor {0}: need m > 2 and m != 2 (mod 4)")]
    BadConductor(u64),
    #[error("place {0} is already accounted for in S or T")]
    PlaceReuse(u64),
    #[error("prime {v} divides the conductor {m} and cannot be used here")]
    RamifiedPlace { v: u64, m: u64 },
    #[error("{m1} does not divide {m2}")]
    NotASubconductor { m1: u64, m2: u64 },
    #[error("depletion/smoothing sets do not match between the two levels")]
    PlaceSetMismatch,
    #[error("integrality check requires a nonempty smoothing set T")]
    EmptySmoothingSet,
    #[error("integrality check requires an odd prime, got {0}")]
    BadIntegralityPrime(u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

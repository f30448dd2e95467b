//! Type-1 pairing backend: prime fields, the quadratic extension, the
//! supersingular curve `y² = x³ + x`, hashing into the groups, the modified
//! Tate pairing and operation counters.

mod counters;
mod curve;
mod ext;
mod field;
mod pairing;
pub mod params;
pub mod primes;
mod scalar;
mod uint;

pub use counters::OpCounters;
pub use curve::{CurveParams, GroupElement, ParamSet, MAX_HASH_ATTEMPTS};
pub use ext::{QuadExt, QuadExtElement};
pub use field::{FieldElement, PrimeField};
pub use pairing::TargetElement;
pub use scalar::{Scalar, ScalarField};
pub use uint::{Uint, BITS as UINT_BITS, LIMBS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("inversion of zero")]
    InverseOfZero,
    #[error("element is not a quadratic residue")]
    NonResidue,
    #[error("invalid curve parameters: {0}")]
    InvalidParameters(&'static str),
    #[error("unknown parameter set")]
    UnknownParameterSet,
    #[error("hash-to-curve retry limit reached")]
    HashRetriesExhausted,
    #[error("malformed point encoding")]
    InvalidEncoding,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("point is not in the order-q subgroup")]
    NotInSubgroup,
}

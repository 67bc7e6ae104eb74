//! The crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HopfError {
    #[error("division by zero in Q(zeta_{conductor})")]
    DivisionByZero { conductor: u64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("parent group mismatch")]
    ParentMismatch,

    #[error("not a primitive root of the required order: {0}")]
    NotPrimitiveRoot(String),

    #[error("bad order: {0}")]
    BadOrder(String),

    #[error("{m} is not divisible by {n}")]
    NotDivisible { n: u64, m: u64 },

    /// A presentation datum failed one of its compatibility invariants.
    #[error("datum violation ({which}) at indices {indices:?}")]
    DatumViolation { which: String, indices: Vec<usize> },

    /// No scalar shift of a skew-primitive image restores the commutation
    /// relation with the group images.
    #[error("not inner-compatible: {0}")]
    NotInnerCompatible(String),

    #[error("group images do not commute up to scalars: {0}")]
    NotCommutingAction(String),

    #[error("group image power is not scalar: {0}")]
    NotFiniteOrder(String),

    #[error("malformed grading: {0}")]
    MalformedGrading(String),

    #[error("support group is not of square shape: {0}")]
    BadSupportShape(String),

    #[error("bicharacter is degenerate")]
    DegenerateBicharacter,

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("shape violation: {0}")]
    ShapeViolation(String),

    /// The block recurrence for an elementary double action does not close up.
    #[error("recurrence closure fails; residual block {residual}")]
    RecurrenceInconsistent { residual: String },

    /// The requested parameters force the skew generators to act by zero, so
    /// no catalog entry with nontrivial skew part exists.
    #[error("skew part is forced trivial: {0}")]
    TrivialSkewPart(String),

    #[error("certification failure: {0}")]
    CertificationFailure(String),

    #[error("schema error at {path}: {msg}")]
    SchemaError { path: String, msg: String },

    #[error("inconsistent homogeneous degree: {0}")]
    InconsistentDegree(String),

    #[error("unknown generator: {0}")]
    UnknownGenerator(String),
}

pub type Result<T> = std::result::Result<T, HopfError>;

//! Crate-wide error type.
//!
//! Every fallible operation returns [`Error`]. The CLI maps errors to exit
//! codes: syntax errors are code 2, internal invariant breaches are code 3,
//! everything else (domain validation) is code 1.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("theta matrix is not antisymmetric at ({row},{col})")]
    NotAntisymmetric { row: usize, col: usize },

    #[error("deformation data mismatch between operands")]
    DeformationMismatch,

    #[error("elements belong to different algebras")]
    AlgebraMismatch,

    #[error("invalid generator index {0}")]
    InvalidGenerator(usize),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("relation {0} is not H-homogeneous")]
    InhomogeneousRelation(usize),

    #[error("relation {0} has a negative exponent; relations must be polynomial")]
    NonPolynomialRelation(usize),

    #[error("negative exponent on non-invertible generator `{0}`")]
    NegativeExponent(String),

    #[error("invertible generator `{0}` has no inverse relation")]
    MissingInverseRelation(String),

    #[error("generator image {0} violates H-degree equivariance")]
    DegreeViolation(usize),

    #[error("relation {0} is not annihilated by the morphism")]
    RelationViolation(usize),

    #[error("morphism composition mismatch: inner target differs from outer source")]
    CompositionMismatch,

    #[error("morphism source does not match the expected algebra")]
    MorphismSourceMismatch,

    #[error("element is not H-coinvariant")]
    NotCoinvariant,

    #[error("cover element {0} is not H-coinvariant")]
    CoverElementNotCoinvariant(usize),

    #[error("element reduces to zero")]
    ZeroElement,

    #[error("chart index out of range: {0}")]
    IndexOutOfRange(usize),

    #[error("partition of unity fails; residue {residue}")]
    PartitionOfUnityFails { residue: String },

    #[error("empty covering family rejected")]
    EmptyCover,

    #[error("cover has {elements} elements but {witnesses} witnesses")]
    WitnessCountMismatch { elements: usize, witnesses: usize },

    #[error("parts do not form a matching family")]
    NotMatching,

    #[error("no glued element exists within the degree cap")]
    NoSolutionAtCap,

    #[error("gluing is ambiguous at this cap: restriction kernel is nonzero")]
    AmbiguousAtCap,

    #[error("stage element is not pointed at the identity")]
    NotPointed,

    #[error("derivation violates the Leibniz constraint on relation {0}")]
    LeibnizViolation(usize),

    #[error("stage or space mismatch between operands")]
    StageMismatch,

    #[error("linear system is inconsistent: rhs outside the column space")]
    Inconsistent,

    #[error("division by zero scalar")]
    DivisionByZero,

    #[error("coefficient denominator vanishes at q=1")]
    SingularAtQ1,

    #[error("unknown command `{0}`")]
    UnknownCommand(String),

    #[error("no {kind} named `{name}` in the workspace")]
    UnknownObject { kind: &'static str, name: String },

    #[error("duplicate {kind} name `{name}`")]
    DuplicateObject { kind: &'static str, name: String },

    #[error("workspace has no theta declaration")]
    MissingTheta,

    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("validation of `{object}` failed: {msg}")]
    Validation { object: String, msg: String },

    #[error("internal invariant breach: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the CLI: 0 ok, 1 validation, 2 parse, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } => 2,
            Error::Internal(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

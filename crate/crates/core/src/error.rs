use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not a prime below 2^16")]
    BadCharacteristic(u32),
    #[error("bad defining polynomial: {0}")]
    BadModulus(String),
    #[error("field order {0} exceeds the supported table size")]
    TooLarge(u64),
    #[error("{0} is not a prime power")]
    BadOrder(u32),
    #[error("cannot parse field name {0:?}")]
    BadName(String),
    #[error("{0} does not embed in {1}")]
    NoEmbedding(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{op}: dimension mismatch ({left} vs {right})")]
    DimensionMismatch { op: &'static str, left: usize, right: usize },
    #[error("{op}: operands live over different fields")]
    FieldMismatch { op: &'static str },
}

/// Validation failures for algebra presentations. Each variant names the
/// violated axiom together with the basis indices that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("expected {expected} structure constants, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("not commutative: {left}*{right} != {right}*{left}")]
    NotCommutative { left: String, right: String },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("unit coordinates do not act as identity on {0}")]
    NotUnital(String),
    #[error("not local: nonzero non-unit {witness} modulo the nilradical")]
    NotLocal { witness: String },
    #[error("bad preset: {0}")]
    Preset(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("expected {expected} action matrices of size {size}x{size}")]
    Shape { expected: usize, size: usize },
    #[error("relation violated: rho({left})rho({right}) != sum of structure constants")]
    Relation { left: String, right: String },
    #[error("the unit does not act as the identity")]
    NotUnital,
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("subspace is not stable under the algebra action")]
    NotSubmodule,
    #[error("bad preset: {0}")]
    Preset(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("generators must be nonempty positive integers")]
    Empty,
    #[error("generators have gcd {0}, expected 1")]
    Gcd(u64),
    #[error("value set is not stable under the semigroup: {0} + {1} missing")]
    NotStable(i64, i64),
    #[error("value set is empty")]
    EmptyValues,
    #[error("ideals belong to different semigroups")]
    ParentMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

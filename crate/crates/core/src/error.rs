use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("dimq below 1: {0}")]
    DimqBelowOne(String),
    #[error("dimq {0} < 2: a + 1/a = dimq has no root a >= 1")]
    NoGrowthRoot(String),
    #[error(
        "{what}: quantum dimension 2 is excluded (the A_o(I_2) / A_u(I_2) exceptional cases, \
         where dimensions grow linearly and no geometric decay is available)"
    )]
    DimqTwoExcluded { what: String },
    #[error("{what} requires dimq >= 3, got {dimq}")]
    DimqBelowThree { what: String, dimq: String },
    #[error("{0} requires a spec with a single A_o factor")]
    NotSingleOrthogonal(String),
    #[error("unknown direction {0}")]
    UnknownDirection(String),
    #[error("irrep {0} is not valid for this spec")]
    InvalidIrrep(String),
    #[error("vertex {0} is not in the tree")]
    NotInTree(String),
    #[error("edge {0} is outside the tree")]
    EdgeOutsideTree(String),
    #[error("expected an ascending edge, got edge {0}")]
    NotAscending(usize),
    #[error("vertex cap {cap} exceeded while building radius {radius}")]
    VertexCapExceeded { cap: usize, radius: usize },
    #[error("radius {requested} exceeds tree radius {radius}")]
    RadiusExceeded { requested: usize, radius: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("negative entry at position {0}")]
    NegativeEntry(usize),
    #[error("weight {r} is not below the growth parameter a (a <= r): series diverges")]
    GrowthBelowWeight { r: String },
    #[error("exponent s = {0} must have 2s integral and nonnegative")]
    InvalidExponent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

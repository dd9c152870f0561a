//! Error types, one enum per subsystem.

use thiserror::Error;

/// Weighing-matrix and family validation failures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry {value} at ({row},{col}) is outside {{-1,0,1}}")]
    BadEntry { row: usize, col: usize, value: i64 },
    #[error("W*W^T has nonzero off-diagonal entry {value} at ({row},{col})")]
    NonDiagonalProduct { row: usize, col: usize, value: i64 },
    #[error("rows of unequal weight: row {row} gives {found}, expected {expected}")]
    UnequalDiagonal { row: usize, found: i64, expected: i64 },
    #[error("matrices have different orders ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error("scale a = {a} is not a perfect square but a product entry is nonzero")]
    NonSquareScale { a: u64 },
    #[error("invalid family parameters: {0}")]
    BadParams(String),
    #[error("family has {f} members; at least 2 are required")]
    TooFewMembers { f: usize },
    #[error("entry {value} of W_{i} W_1^T is not divisible by sqrt(a) = {s}")]
    InexactDivision { i: usize, value: i64, s: i64 },
    #[error("family is not MUWM: a = {a} but weight k = {k}")]
    NotMuwmParams { a: u64, k: u64 },
    #[error("members {i} and {j} are not quasi-unbiased: product entry {value} with a = {a}")]
    NotQuasiUnbiased { i: usize, j: usize, value: i64, a: u64 },
    #[error("member {index}: {source}")]
    Member {
        index: usize,
        #[source]
        source: Box<MatrixError>,
    },
}

/// Spherical-code and decomposition failures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SphericalError {
    #[error("code is empty")]
    Empty,
    #[error("vector {index} has squared norm {found}, expected {expected}")]
    NormMismatch { index: usize, found: i64, expected: i64 },
    #[error("duplicate vector at index {index}")]
    DuplicateVector { index: usize },
    #[error("code is not antipodal: vector {index} has no negative in the code")]
    NotAntipodal { index: usize },
    #[error("no cross-polytope decomposition with frame size {frame_size} exists ({nodes} search nodes)")]
    NoDecomposition { frame_size: usize, nodes: u64 },
    #[error("decomposition search exceeded the node budget of {budget} ({nodes} nodes visited)")]
    BudgetExceeded { budget: u64, nodes: u64 },
    #[error("vector {index} has an entry outside {{-1,0,1}}")]
    BadAlphabet { index: usize },
    #[error("inner product {value} is outside the admissible set {expected}")]
    BadInnerProducts { value: i64, expected: String },
    #[error("inner product {value} with frame vector {j} is not divisible by {s}")]
    InexactFrameCoordinates { value: i64, j: usize, s: i64 },
    #[error("decomposition has {found} parts, expected {expected}")]
    WrongPartCount { found: usize, expected: usize },
    #[error("invalid decomposition: {0}")]
    BadDecomposition(String),
}

/// Binary linear-code failures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("modulus {n} is even; 2-cyclotomic cosets need an odd modulus")]
    EvenModulus { n: u64 },
    #[error("m = {m} is outside the shipped primitive-polynomial table")]
    UnsupportedM { m: u32 },
    #[error("code dimension {dim} exceeds the enumeration cap of {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("the second code is not a subcode of the first")]
    NotSubcode,
    #[error("pipeline hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("word length {len} exceeds the {max}-bit word representation")]
    LengthOverflow { len: usize, max: usize },
}

/// Z4-code failures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Z4Error {
    #[error("m = {m} is outside the shipped primitive-polynomial table")]
    UnsupportedM { m: u32 },
    #[error("Hensel lift consistency check failed: {0}")]
    LiftFailure(String),
    #[error("pipeline hypothesis failed: {0}")]
    HypothesisFailed(String),
}

/// Root-system and frame-search failures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("invalid lattice spec: {0}")]
    BadSpec(String),
    #[error("D_d frame decomposition requires even d >= 4, got {d}")]
    OddD { d: usize },
    #[error("search exceeded the node budget of {budget} ({nodes} nodes visited)")]
    Timeout { budget: u64, nodes: u64 },
}

/// Bound-certificate failures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("annihilator is degenerate for d = {d} (need d > 2)")]
    DegenerateD { d: u64 },
    #[error("LP certificate requires even d >= 4, got {d}")]
    UnsupportedD { d: u64 },
    #[error("Krawtchouk expansion mismatch for c_{k}: solved {solved}, expected {expected}")]
    ExpansionMismatch { k: usize, solved: String, expected: String },
}

/// Top-level error for pipelines and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Spherical(#[from] SphericalError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Z4(#[from] Z4Error),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

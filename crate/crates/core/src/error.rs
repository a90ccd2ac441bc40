use std::path::PathBuf;

use thiserror::Error;

use crate::gq::GqOrder;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse polynomial {input:?} at offset {position}")]
pub struct PolyParseError {
    pub input: String,
    pub position: usize,
}

/// Which incidence configuration broke a generalized-quadrangle axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GqWitness {
    /// A point (line) whose degree differs from the prevailing one.
    Degree { element: usize, degree: usize, expected: usize },
    /// Degree is constant but below 2, so the order parameter would be 0.
    Degenerate { degree: usize },
    /// Two distinct points (lines) sharing two distinct lines (points).
    DoubleMeet { pair: (usize, usize), shared: (usize, usize) },
    /// Anti-flag `(point, line)` with `count != 1` connecting flags.
    AntiFlag { point: usize, line: usize, count: usize },
}

impl std::fmt::Display for GqWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GqWitness::Degree { element, degree, expected } => {
                write!(f, "element {element} has degree {degree}, expected {expected}")
            }
            GqWitness::Degenerate { degree } => write!(f, "constant degree {degree} < 2"),
            GqWitness::DoubleMeet { pair, shared } => {
                write!(f, "{} and {} share both {} and {}", pair.0, pair.1, shared.0, shared.1)
            }
            GqWitness::AntiFlag { point, line, count } => {
                write!(f, "anti-flag (point {point}, line {line}) has {count} connecting pairs")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum GqError {
    #[error("parameter {0} is not prime")]
    CompositeParameter(u64),
    #[error("parameter must be at least {min}, got {got}")]
    ParameterTooSmall { got: u64, min: u64 },
    #[error("invalid incidence structure: {0}")]
    InvalidIncidence(String),
    #[error("GQ1 violated (points): {0}")]
    Gq1Violation(GqWitness),
    #[error("GQ2 violated (lines): {0}")]
    Gq2Violation(GqWitness),
    #[error("GQ3 violated: {0}")]
    Gq3Violation(GqWitness),
    #[error("parse error in {}: line {line}, column {column}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("i/o error on {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("malformed relation matrix: {0}")]
    InvalidMatrix(String),
    #[error("class {0} is empty")]
    MissingClass(usize),
    #[error("transpose of class {class} is not a class: pair ({x},{y})")]
    NotClosedUnderTranspose { class: usize, x: usize, y: usize },
    #[error("not a scheme: p[{k}][{i}][{j}] is {expected} on the representative but {found} on pair ({x},{y})")]
    NotAScheme { k: usize, i: usize, j: usize, x: usize, y: usize, expected: i64, found: i64 },
    #[error("quotient is ill-defined between blocks {0} and {1}")]
    QuotientIllDefined(usize, usize),
    #[error("scheme is not thin: class {class} has valency {valency}")]
    NotThin { class: usize, valency: i64 },
    #[error("classes {0:?} do not form a parabolic")]
    NotParabolic(Vec<usize>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    NotRegular { vertex: usize, degree: usize, expected: usize },
    #[error("adjacent pair ({0},{1}) has {2} common neighbours, expected {3}")]
    LambdaMismatch(usize, usize, usize, usize),
    #[error("non-adjacent pair ({0},{1}) has {2} common neighbours, expected {3}")]
    MuMismatch(usize, usize, usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FusionError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition {0} does not define a fusion")]
    NotAFusion(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Debug, Error)]
pub enum ReconstructError {
    #[error("expected a {expected}-class scheme, got {found} classes")]
    WrongClassCount { expected: usize, found: usize },
    #[error("intersection numbers do not match the table at {0}")]
    ParameterMismatch(String),
    #[error("no class relabeling matches the reference table")]
    NoIsomorphism,
    #[error("clique cover violated at vertex {vertex}: {detail}")]
    CoverViolation { vertex: usize, detail: String },
    #[error("clique-intersection graph has an odd cycle through cliques {0} and {1}")]
    NotBipartite(usize, usize),
    #[error("level decomposition from vertex {base} failed: {detail}")]
    LevelMismatch { base: usize, detail: String },
    #[error("reconstructed order {found} differs from inferred {expected}")]
    OrderMismatch { expected: GqOrder, found: GqOrder },
    #[error("reconstructed structure is not a GQ: {0}")]
    GqAxiomFailure(#[from] GqError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{}: line {line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("i/o error on {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

/// A failed consistency check on the closed-form tables.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("table entry {entry} does not parse: {source}")]
    BadEntry { entry: String, source: PolyParseError },
    #[error("{identity} identity fails at (k,i,j) = {indices:?}")]
    IdentityFailure { identity: &'static str, indices: (usize, usize, usize) },
    #[error("orbit mismatch: {0}")]
    OrbitMismatch(String),
    #[error("element {element} does not scale {triplet:?} as prescribed")]
    ScalingMismatch { element: &'static str, triplet: (usize, usize, usize) },
    #[error("fused entry ({k},{i},{j}) is not the block sum from representative {representative}")]
    FusedMismatch { k: usize, i: usize, j: usize, representative: usize },
}

/// A counterexample to the unique-connecting-flag property on a reconstruction.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QmError {
    #[error("non-incident point {point} and line {line} have {count} connecting pairs")]
    AntiFlag { point: usize, line: usize, count: usize },
    #[error("far pair ({x},{y}): {detail}")]
    MiddlemanSplit { x: usize, y: usize, detail: String },
}

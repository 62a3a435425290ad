//! Exact Okounkov bodies of Bott-Samelson varieties with respect to the
//! vertical flag.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`], [`linalg`], [`poly`]: exact scalars, matrices, polynomials.
//! * [`rootsys`]: Cartan data, Weyl groups, Demazure characters.
//! * [`rep`]: fundamental representations with explicit Chevalley matrices.
//! * [`bs`]: the Bott-Samelson context (word, representations, caches).
//! * [`sections`], [`picard`], [`valuation`]: section spaces on the big cell,
//!   the Picard lattice, and the flag valuation.
//! * [`polyhedra`], [`okounkov`], [`weights`]: convex geometry, bodies and
//!   cones, weight-multiplicity slices.

pub mod arith;
pub mod bs;
pub mod linalg;
pub mod okounkov;
pub mod picard;
pub mod poly;
pub mod polyhedra;
pub mod rep;
pub mod rootsys;
pub mod sections;
pub mod valuation;
pub mod weights;

pub use arith::Q;
pub use bs::BottSamelson;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("class {0:?} is not nef")]
    NotNef(Vec<i64>),
    #[error("class {0:?} is not effective")]
    NotEffective(Vec<i64>),
    #[error("no divisor class matches: {0}")]
    NoMatch(String),
    #[error("several divisor classes match: {0}")]
    Ambiguous(String),
    #[error("verification failed: {0}")]
    VerificationFailure(String),
    #[error("span deficiency for class {class:?}: rank {rank} < expected {expected}")]
    SpanDeficiency {
        class: Vec<i64>,
        rank: usize,
        expected: usize,
    },
    #[error("degree box {0} too small")]
    BoxTooSmall(u32),
    #[error("computation unstable: {0}")]
    Unstable(String),
    #[error("zero section has no valuation")]
    ZeroSection,
    #[error("weight data admits no exact affine fit")]
    NotAffine,
    #[error("weight {0} is not in the interior of the weight polytope")]
    NotInterior(String),
    #[error("no level up to {0} makes the weight integral")]
    NonIntegralAll(u32),
    #[error("cone is not pointed")]
    NotPointed,
    #[error("empty input")]
    EmptyInput,
    #[error("chamber resolution failed: {0}")]
    ChamberResolutionFailure(String),
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json error: {0}")]
    Json(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

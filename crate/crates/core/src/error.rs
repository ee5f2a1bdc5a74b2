use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
///
/// Mathematically meaningful failures (a witness against a claimed
/// invariant, an aborted search) are distinct variants from plain
/// input/format problems so that callers can map them to different
/// exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {k} out of range for n = {n}")]
    VertexOutOfRange { k: usize, n: usize },

    #[error("entry position ({i},{j}) invalid for n = {n}")]
    PositionOutOfRange { i: usize, j: usize, n: usize },

    #[error("quiver is not inner: entry at position {pos} is zero")]
    NotInner { pos: usize },

    #[error("pfaffian requires even size, got n = {n}")]
    OddSize { n: usize },

    #[error("sign pattern is not in the required carriage family: {0}")]
    WrongCarriage(String),

    #[error("n = {n} exceeds the flip-graph cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("boundary evaluation is ambiguous: compatible pieces disagree at the point")]
    AmbiguousBoundary,

    #[error("quiver entry at position {pos} is not an integer")]
    NonIntegerEntry { pos: usize },

    #[error("search at n = {n}, degree {degree}, mode {mode} exceeds the resource guard (pass force to override)")]
    ResourceGuard {
        n: usize,
        degree: usize,
        mode: &'static str,
    },

    #[error("operation supports only n = {expected}, got n = {got}")]
    UnsupportedSize { expected: usize, got: usize },

    #[error(
        "internal consistency failure: a computed basis element failed symbolic verification ({0})"
    )]
    InternalVerification(String),

    #[error("basis element {element} is not a polynomial in the determinant: {detail}")]
    NotSpannedByDet { element: usize, detail: String },

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("invalid polynomial text: {0}")]
    InvalidPoly(String),

    #[error("invalid sign pattern {0:?}")]
    InvalidPattern(String),

    #[error("invalid file: {0}")]
    InvalidFile(String),
}

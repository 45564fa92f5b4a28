//! Error types shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the algebra, curve, blow-up, tree and bound layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A series division produced an element of negative order; the result
    /// does not live in the power-series ring. Blow-ups only ever divide by
    /// minimal-valuation elements, so this signals a bug in the caller.
    #[error("division result has negative order and is not a power series")]
    DivisionNotRepresentable,

    /// Division by the zero series.
    #[error("division by the zero series")]
    DivisionByZero,

    /// After cancelling common powers of the variable the denominator still
    /// has positive order, so the fraction is not a power series.
    #[error("denominator has positive order: element is not a power series")]
    NotASeries,

    /// Every generator vanished after normalization.
    #[error("all generators vanish after normalization: the ring is empty")]
    EmptyRing,

    /// A branch received only zero coordinates, so its valuation is infinite.
    #[error("branch {branch} carries only zero coordinates (curve is not reduced there)")]
    InfiniteComponent { branch: usize },

    /// The deterministic minimal-element search ran out of candidates. This
    /// cannot happen over the rationals and guards an internal bug.
    #[error("no minimal-valuation element found by the deterministic search")]
    SelectionFailed,

    /// The pairwise locality relation failed to be transitive. Transitivity
    /// holds for genuine algebroid curves, so firing means bad input or a bug.
    #[error("locality relation is not transitive on branches {i}, {j}, {k}")]
    InconsistentLocality { i: usize, j: usize, k: usize },

    /// The blow-up loop hit its safety cap.
    #[error("blow-up sequence exceeded {cap} levels without stabilizing")]
    MaxStepsExceeded { cap: u64 },

    /// Every generator restricted to this branch is a series in a proper
    /// power of the branch variable, so the branch multiplicity can never
    /// reach 1 and the blow-up sequence cannot stabilize.
    #[error("branch {branch} is parametrized in powers of t^{d}: not a primitive parametrization")]
    NonPrimitiveBranch { branch: usize, d: u64 },

    /// A sequence of multiplicities violates the partial-sum property.
    #[error("entry {index} is not an exact sum of later entries: not a multiplicity sequence")]
    NotAMultiplicitySequence { index: usize },

    /// Every generator has identical series on both branches, so no
    /// combination can ever produce a discrepancy.
    #[error("all generators have identical series on both branches: no discrepancy can be produced")]
    NoDiscrepancyPossible,

    /// The discrepancy-generation loop hit its iteration cap.
    #[error("discrepancy-generation loop exceeded {cap} iterations")]
    BoundIterationExceeded { cap: u64 },

    /// A discrepancy order D below the branch conductor was not a partial sum
    /// of the common multiplicity sequence. The discrepancy bound relies on
    /// this, so the violation is reported instead of absorbed.
    #[error("discrepancy order {d} is not a partial sum of the branch multiplicity sequence")]
    DiscrepancyNotPartialSum { d: u64 },

    /// The full pipeline requires a local input ring; the Arf closure of a
    /// product is the product of the closures of its local components.
    #[error("input ring is not local: branches split into blocks {blocks:?} at level 1")]
    NotLocal { blocks: Vec<Vec<usize>> },

    /// A computed multiplicity tree failed one of its structural axioms.
    #[error("computed multiplicity tree is invalid: {0}")]
    InvalidTree(String),

    /// Expression-level syntax error, with position.
    #[error("parse error at line {line}, column {col}: {message}")]
    Parse { line: usize, col: usize, message: String },

    /// An identifier other than the declared branch variable appeared.
    #[error("unknown variable `{found}` at line {line}, column {col} (expected `{expected}`)")]
    WrongVariable { expected: String, found: String, line: usize, col: usize },

    /// Structural problem in a curve file (arity, duplicate variables, JSON shape).
    #[error("curve file rejected: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

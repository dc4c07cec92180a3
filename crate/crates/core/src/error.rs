use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime below 65536")]
    NotPrime(u32),
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("vertex index {0} out of range")]
    BadVertex(usize),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("nilpotency bound must be at least 1")]
    ZeroBound,
    #[error("relation {relation}: path {term} is empty")]
    EmptyPath { relation: usize, term: usize },
    #[error("relation {relation}: path {term} is not composable (arrows compose left to right)")]
    NotComposable { relation: usize, term: usize },
    #[error("relation {relation}: paths do not share source and target")]
    NonParallelRelation { relation: usize },
    #[error("relations force the idempotent at vertex {0} to vanish")]
    InconsistentRelations(usize),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("arrow matrices have the wrong shape")]
    BadDimensions,
    #[error("representation violates relation {0}")]
    RelationViolated(usize),
    #[error("representation has a nonzero path of length >= the nilpotency bound")]
    BoundViolated,
    #[error("per-vertex maps do not intertwine the arrow actions")]
    NotIntertwining,
    #[error("module has a projective direct summand with dimension vector {0:?}")]
    ProjectiveSummand(Vec<usize>),
    #[error("module has an injective direct summand with dimension vector {0:?}")]
    InjectiveSummand(Vec<usize>),
    #[error("module is not indecomposable")]
    NotIndecomposable,
    #[error("algebra is not selfinjective")]
    NotSelfinjective,
    #[error("algebra is not a selfinjective algebra with radical cube zero")]
    HypothesesNotValidated,
    #[error("generator list is missing the indecomposable projective at vertex {0}")]
    MissingProjective(usize),
    #[error("module is not a summand of the generator list")]
    NotInGenerators,
    #[error("module {0} is projective or injective")]
    ProjectiveOrInjective(String),
    #[error("fast and general mutation criteria disagree")]
    BranchDisagreement,
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}

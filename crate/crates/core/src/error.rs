use thiserror::Error;

use crate::gpd::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("groupoid axioms violated: {}", format_violations(.0))]
    InvalidGroupoid(Vec<Violation>),

    #[error("enumeration refused: 2^{arrows} subsets exceed the work bound {bound}")]
    WorkBoundExceeded { arrows: usize, bound: u64 },

    #[error("isomorphism search exceeded its budget of {budget} nodes")]
    SearchBudgetExceeded { budget: u64 },

    #[error("dimension mismatch: expected {expected} coefficients, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid exponent p = {0}; p must be at least 1")]
    InvalidExponent(f64),

    #[error(
        "p = 2 is refused here: the structure theorem for MP-partial isometries \
         only holds for p != 2"
    )]
    PTwoRefused,

    #[error("norm solver did not converge within {iterations} iterations (best value {best})")]
    NotConverged { best: f64, iterations: usize },

    #[error("norm descriptions disagree: {first} vs {second}")]
    NormDisagreement { first: f64, second: f64 },

    #[error("hermitian tests disagree: structural={structural}, numerical={numerical}")]
    HermitianDisagreement { structural: bool, numerical: bool },

    #[error("operator is not in the image of the left regular representation (commutator {0:e})")]
    NotInImage(f64),

    #[error("element is not idempotent (defect {0:e})")]
    NotIdempotent(f64),

    #[error("element is not an MP-partial isometry")]
    NotPartialIsometry,

    #[error("Moore-Penrose verification failed: {0}")]
    MpVerification(String),

    #[error("not an inverse semigroup: {0}")]
    NotInverseSemigroup(String),

    #[error("closure exceeded the bound of {0} elements")]
    ClosureBoundExceeded(usize),

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

use thiserror::Error;

use crate::exactlin::NoSolution;
use crate::quiver::SpecError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Spec(#[from] SpecError),
    /// Some path of length `truncation` (or `l_max`) survives modulo the relations.
    #[error("category is not finite-dimensional: path `{witness}` is not in the ideal")]
    NotFiniteDimensional { witness: String },
    #[error("linear system has no solution")]
    NoSolution(#[from] NoSolution),
    #[error("chain map lift failed: {0}")]
    LiftFailure(String),
    #[error("bimodule axiom violated: {0}")]
    BimoduleAxiomViolation(String),
    #[error("not a one-point extension: {0}")]
    NotOnePointExtension(String),
    #[error("module does not satisfy relation `{0}`")]
    RelationViolated(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

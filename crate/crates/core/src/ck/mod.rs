//! The Cuntz-Krieger algebra `O_A` as an exact rewriting engine graded by
//! the free group.

mod adjacency;
mod algebra;
pub mod checks;
mod element;
pub mod identity;
pub mod monomial;
pub mod path_rep;
pub mod scalar;

use thiserror::Error;

pub use adjacency::AdjacencyMatrix;
pub use algebra::CkAlgebra;
pub use checks::CheckReport;
pub use element::CkElement;
pub use identity::{Family, Identity, WordExpr};
pub use monomial::{CkMonomial, PathWord};
pub use path_rep::{oracle_level, PathVector, TruncatedPathRep};
pub use scalar::Scalar;

use crate::group::GroupError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CkError {
    #[error("invalid adjacency matrix: {0}")]
    InvalidMatrix(String),
    #[error("monomial {0} is not valid over the matrix")]
    InvalidMonomial(String),
    #[error("elements are over different adjacency matrices")]
    AdjacencyMismatch,
    #[error("generator index {index} outside 1..={size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("word of rank {word} used with an algebra of rank {algebra}")]
    RankMismatch { word: usize, algebra: usize },
    #[error("|{t} {r}| < |{t}| + |{r}|: the product is not a dot product")]
    NotDot { t: String, r: String },
    #[error("{0} is not of the form alpha beta^-1 with alpha, beta positive")]
    NotInPositiveQuotient(String),
    #[error("truncation level must be at least 1, got {0}")]
    InvalidLevel(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

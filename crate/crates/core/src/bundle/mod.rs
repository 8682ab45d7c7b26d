//! Fell bundles over finite groups with fibers inside `M_d`, realised on
//! `C^d ⊗ l^2(G)` through the regular embedding.

pub mod checks;
pub mod examples;
mod fell;
mod operator;
pub mod spec;
pub mod subspace;

use thiserror::Error;

pub use fell::{BundleElement, FiniteFellBundle, ValidationReport, Violation};
pub use operator::GradedOperator;
pub use spec::BundleSpec;
pub use subspace::{CMatrix, CVector, Subspace};

use crate::group::GroupError;

#[derive(Debug, Error)]
pub enum BundleError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("expected {expected} fibers, found {found}")]
    FiberCount { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected {dim}x{dim}")]
    Shape { rows: usize, cols: usize, dim: usize },
    #[error("u_{t} is not unitary (residual {residual:.3e})")]
    NotUnitary { t: usize, residual: f64 },
    #[error("the unitary at the identity must be the identity matrix")]
    IdentityUnitary,
    #[error("Ad(u_{t}) does not preserve the subalgebra (residual {residual:.3e})")]
    ActionNotPreserving { t: usize, residual: f64 },
    #[error("not a Fell bundle: {0}")]
    Invalid(String),
    #[error("operator is not equivariant at degree {t} (column disagreement {residual:.3e})")]
    NotEquivariant { t: usize, residual: f64 },
    #[error("bad bundle spec: {0}")]
    Spec(String),
}

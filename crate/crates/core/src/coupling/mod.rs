//! Geometric data `(V, Γ, 𝔽)`, its four integrability conditions, and the
//! coupling Dirac structure it generates.

mod casimir;
mod data;
mod dirac;
mod integrability;
mod poisson;
mod report;

pub use casimir::{check_casimir_complex, equivalent_data, restrict_to_fiber, FiberRestriction};
pub use data::GeometricData;
pub use dirac::{
    build_dirac, closure_class, verify_closure, verify_isotropy, DiracPresentation, Generator,
    GeneratorKind, RelationClass,
};
pub use integrability::check_integrability;
pub use poisson::{
    characteristic_kernel, decompose_coupling, extract_poisson, Decomposition, PoissonExtraction,
};
pub use report::{CheckReport, ConditionReport, Status, Witness};

use thiserror::Error;

use crate::fibered::FiberedError;
use crate::symexpr::ExprError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CouplingError {
    #[error("vertical bivector has a component on `{0}`, which involves a base coordinate")]
    NonVertical(String),
    #[error("{what} must have degree {expected}, found {found}")]
    Degree {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{what} lives on dimension {found}, expected {expected}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("degenerate horizontal 2-form: det[F] = {determinant}")]
    Degenerate { determinant: String },
    #[error("not transverse: the base-base block of the bivector is singular (det = {determinant})")]
    NotTransverse { determinant: String },
    #[error("`{function}` is not a Casimir: its Hamiltonian vector field is {witness}")]
    NonCasimir { function: String, witness: String },
    #[error("internal consistency error: remainder {0} is not vertical")]
    NonVerticalRemainder(String),
    #[error("no value given for base coordinate `{0}`")]
    MissingBaseValue(String),
    #[error(transparent)]
    Fibered(#[from] FiberedError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[cfg(test)]
mod tests;

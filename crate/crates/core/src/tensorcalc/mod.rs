//! Multivector fields, differential forms and their brackets on a coordinate
//! patch. Tensors carry only the patch dimension; coordinates are indices.

mod calculus;
mod courant;
mod graded;

pub use calculus::{
    apply, bivector_eval, contract, differential, evaluate, exterior_derivative, hamiltonian,
    interior, lie_bracket, lie_derivative, poisson_bracket, schouten, sharp, LieDerivative,
};
pub use courant::{courant_bracket, pairing_plus, CourantSection};
pub use graded::{DiffForm, Forms, Graded, Kind, Multivector, Vectors};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("cannot contract a {multivector}-vector into a {form}-form")]
    ContractionDegree { multivector: usize, form: usize },
    #[error("expected degree {expected}, found {found}")]
    Degree { expected: usize, found: usize },
    #[error("patch dimensions differ: {left} vs {right}")]
    Dimension { left: usize, right: usize },
}

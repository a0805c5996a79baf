use crate::symexpr::Coefficient;

use super::calculus::{evaluate, exterior_derivative, half, interior, lie_bracket, LieDerivative};
use super::{DiffForm, Multivector, TensorError};

/// A section `(X, ξ)` of `TE ⊕ T*E`.
#[derive(Clone, Debug, PartialEq)]
pub struct CourantSection<C: Coefficient = crate::symexpr::ScalarExpr> {
    pub vf: Multivector<C>,
    pub form: DiffForm<C>,
}

impl<C: Coefficient> CourantSection<C> {
    pub fn new(vf: Multivector<C>, form: DiffForm<C>) -> Result<Self, TensorError> {
        if vf.degree() != 1 {
            return Err(TensorError::Degree {
                expected: 1,
                found: vf.degree(),
            });
        }
        if form.degree() != 1 {
            return Err(TensorError::Degree {
                expected: 1,
                found: form.degree(),
            });
        }
        if vf.dim() != form.dim() {
            return Err(TensorError::Dimension {
                left: vf.dim(),
                right: form.dim(),
            });
        }
        Ok(Self { vf, form })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            vf: Multivector::zero(dim, 1),
            form: DiffForm::zero(dim, 1),
        }
    }

    pub fn dim(&self) -> usize {
        self.vf.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.vf.is_zero() && self.form.is_zero()
    }
}

/// `⟨s₁, s₂⟩₊ = ½(ξ₁(X₂) + ξ₂(X₁))`.
pub fn pairing_plus<C: Coefficient>(s1: &CourantSection<C>, s2: &CourantSection<C>) -> C {
    half(&evaluate(&s1.form, &s2.vf).plus(&evaluate(&s2.form, &s1.vf)))
}

/// `([X₁,X₂], ℒ_{X₁}ξ₂ − i_{X₂}dξ₁)`, the non-skew form of the bracket.
pub fn courant_bracket<C: Coefficient>(
    s1: &CourantSection<C>,
    s2: &CourantSection<C>,
) -> CourantSection<C> {
    let vf = lie_bracket(&s1.vf, &s2.vf);
    let form = s2
        .form
        .lie_derivative(&s1.vf)
        .minus(&interior(&s2.vf, &exterior_derivative(&s1.form)));
    CourantSection { vf, form }
}

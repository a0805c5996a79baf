use std::sync::Arc;

use crate::fibered::{BaseForm, Connection, FiberedPatch};
use crate::symexpr::{Coefficient, Fraction, ScalarExpr};
use crate::tensorcalc::Multivector;

use super::CouplingError;

/// The triple `(V, Γ, 𝔽)` on a fibered patch: vertical bivector, connection
/// and horizontal 2-form stored by its values on horizontal lifts.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricData<C: Coefficient = ScalarExpr> {
    patch: Arc<FiberedPatch>,
    bivector: Multivector<C>,
    connection: Connection<C>,
    two_form: BaseForm<C>,
}

impl<C: Coefficient> GeometricData<C> {
    pub fn new(
        patch: Arc<FiberedPatch>,
        bivector: Multivector<C>,
        connection: Connection<C>,
        two_form: BaseForm<C>,
    ) -> Result<Self, CouplingError> {
        if bivector.degree() != 2 {
            return Err(CouplingError::Degree {
                what: "vertical bivector",
                expected: 2,
                found: bivector.degree(),
            });
        }
        if bivector.dim() != patch.dim() {
            return Err(CouplingError::Dimension {
                what: "vertical bivector",
                expected: patch.dim(),
                found: bivector.dim(),
            });
        }
        let names = patch.names();
        if let Some((idx, _)) = bivector
            .entries()
            .find(|(idx, _)| idx.iter().any(|&i| patch.fiber_position(i).is_none()))
        {
            return Err(CouplingError::NonVertical(format!(
                "{}^{}",
                names[idx[0]], names[idx[1]]
            )));
        }
        if two_form.degree() != 2 {
            return Err(CouplingError::Degree {
                what: "horizontal 2-form",
                expected: 2,
                found: two_form.degree(),
            });
        }
        if two_form.table().dim() != patch.n_base() {
            return Err(CouplingError::Dimension {
                what: "horizontal 2-form",
                expected: patch.n_base(),
                found: two_form.table().dim(),
            });
        }
        // shape check on the connection
        let connection = Connection::new(&patch, connection.coeffs().to_vec())?;
        Ok(Self {
            patch,
            bivector,
            connection,
            two_form,
        })
    }

    /// `V = 0`, `Γ = 0`, `𝔽 = 0`.
    pub fn trivial(patch: Arc<FiberedPatch>) -> Self {
        let dim = patch.dim();
        Self {
            bivector: Multivector::zero(dim, 2),
            connection: Connection::flat(&patch),
            two_form: BaseForm::zero(&patch, 2),
            patch,
        }
    }

    pub fn patch(&self) -> &Arc<FiberedPatch> {
        &self.patch
    }

    pub fn bivector(&self) -> &Multivector<C> {
        &self.bivector
    }

    pub fn connection(&self) -> &Connection<C> {
        &self.connection
    }

    pub fn two_form(&self) -> &BaseForm<C> {
        &self.two_form
    }

    pub fn names(&self) -> Vec<String> {
        self.patch.names()
    }

    pub fn with_two_form(&self, two_form: BaseForm<C>) -> Result<Self, CouplingError> {
        Self::new(
            self.patch.clone(),
            self.bivector.clone(),
            self.connection.clone(),
            two_form,
        )
    }

    pub fn to_fraction(&self) -> GeometricData<Fraction> {
        GeometricData {
            patch: self.patch.clone(),
            bivector: self.bivector.to_fraction(),
            connection: self.connection.map_coeffs(|c| c.to_fraction()),
            two_form: self.two_form.map_coeffs(|c| c.to_fraction()),
        }
    }

    /// `𝔽` as an antisymmetric matrix over base positions.
    pub fn two_form_matrix(&self) -> Vec<Vec<C>> {
        let n = self.patch.n_base();
        (0..n)
            .map(|a| (0..n).map(|b| self.two_form.get(&[a, b])).collect())
            .collect()
    }
}

impl GeometricData<Fraction> {
    /// Back to ring coefficients when no genuine fraction remains.
    pub fn to_ring(&self) -> Option<GeometricData<ScalarExpr>> {
        let bivector = self.bivector.to_ring()?;
        let rows: Option<Vec<Vec<ScalarExpr>>> = self
            .connection
            .coeffs()
            .iter()
            .map(|r| r.iter().map(Fraction::to_expr).collect())
            .collect();
        let connection = Connection::new(&self.patch, rows?).ok()?;
        let two_form = BaseForm::from_table(self.two_form.table().to_ring()?);
        Some(GeometricData {
            patch: self.patch.clone(),
            bivector,
            connection,
            two_form,
        })
    }
}

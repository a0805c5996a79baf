use std::collections::BTreeMap;

use crate::fibered::{d_gamma, BaseForm};
use crate::symexpr::{Coefficient, Coordinate, Patch, Rational, ScalarExpr, Substitution};
use crate::tensorcalc::{hamiltonian, Multivector};

use super::integrability::witnesses_of;
use super::report::{CheckReport, ConditionReport};
use super::{CouplingError, GeometricData};

fn require_casimir<C: Coefficient>(
    data: &GeometricData<C>,
    f: &C,
) -> Result<(), CouplingError> {
    let x = hamiltonian(data.bivector(), f);
    if x.is_zero() {
        return Ok(());
    }
    let names = data.names();
    Err(CouplingError::NonCasimir {
        function: f.render(&names),
        witness: x.render(&names),
    })
}

/// `(V, Γ, 𝔽 + ∂_Γ Φ)` for a Casimir-valued 1-form `Φ` on the base.
pub fn equivalent_data<C: Coefficient>(
    data: &GeometricData<C>,
    potential: &BaseForm<C>,
) -> Result<GeometricData<C>, CouplingError> {
    if potential.degree() != 1 {
        return Err(CouplingError::Degree {
            what: "potential",
            expected: 1,
            found: potential.degree(),
        });
    }
    for (_, c) in potential.entries() {
        require_casimir(data, c)?;
    }
    let shift = d_gamma(data.patch(), data.connection(), potential);
    data.with_two_form(data.two_form().plus(&shift))
}

/// `∂_Γ² = 0` on the Casimir-valued functions `C` and 1-forms `C dx^a`.
pub fn check_casimir_complex<C: Coefficient>(
    data: &GeometricData<C>,
    casimirs: &[C],
) -> Result<CheckReport, CouplingError> {
    for c in casimirs {
        require_casimir(data, c)?;
    }
    let fp = data.patch();
    let conn = data.connection();
    let names = fp.names();
    let base = |a: usize| names[fp.base_index(a)].clone();
    let mut functions = Vec::new();
    let mut one_forms = Vec::new();
    for c in casimirs {
        let tag = c.render(&names);
        let mut f = BaseForm::zero(fp, 0);
        f.add_entry(&[], c.clone());
        let dd = d_gamma(fp, conn, &d_gamma(fp, conn, &f));
        functions.extend(witnesses_of(std::slice::from_ref(&tag), dd.table(), base, &names));
        for a in 0..fp.n_base() {
            let mut w = BaseForm::zero(fp, 1);
            w.add_entry(&[a], c.clone());
            let dd = d_gamma(fp, conn, &d_gamma(fp, conn, &w));
            let prefix = [format!("{tag}*d{}", base(a))];
            one_forms.extend(witnesses_of(&prefix, dd.table(), base, &names));
        }
    }
    Ok(CheckReport::new(vec![
        ConditionReport::from_witnesses("d_gamma_squared_functions", functions),
        ConditionReport::from_witnesses("d_gamma_squared_one_forms", one_forms),
    ]))
}

/// The vertical bivector frozen at a base point, on the fiber coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberRestriction {
    pub patch: Patch,
    pub bivector: Multivector<ScalarExpr>,
}

impl FiberRestriction {
    /// Jacobi check of the restricted bivector.
    pub fn jacobi_report(&self) -> CheckReport {
        let names = self.patch.names();
        let vv = crate::tensorcalc::schouten(&self.bivector, &self.bivector);
        let coord = |i: usize| names[i].clone();
        CheckReport::new(vec![ConditionReport::from_witnesses(
            "fiber_jacobi",
            witnesses_of(&[], &vv, coord, &names),
        )])
    }
}

/// Substitutes `x = x₀` (keyed by base coordinate name) into `V`.
pub fn restrict_to_fiber(
    data: &GeometricData<ScalarExpr>,
    point: &BTreeMap<String, Rational>,
) -> Result<FiberRestriction, CouplingError> {
    let fp = data.patch();
    let names = fp.names();
    let mut assignments = BTreeMap::new();
    for &b in fp.base_indices() {
        let value = point
            .get(&names[b])
            .ok_or_else(|| CouplingError::MissingBaseValue(names[b].clone()))?;
        assignments.insert(b, Substitution::Value(ScalarExpr::constant(value.clone())));
    }
    let fiber_coords: Vec<Coordinate> = fp
        .fiber_indices()
        .iter()
        .map(|&i| fp.patch().coord(i).clone())
        .collect();
    let patch = Patch::new(fiber_coords)?;
    let position = |i: usize| fp.fiber_position(i).expect("vertical index");
    let mut bivector = Multivector::zero(fp.n_fiber(), 2);
    for (idx, c) in data.bivector().entries() {
        let value = c.substitute(&assignments, &names)?.reindex(position);
        bivector.add_entry(&[position(idx[0]), position(idx[1])], value);
    }
    Ok(FiberRestriction { patch, bivector })
}


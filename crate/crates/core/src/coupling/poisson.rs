use std::sync::Arc;

use crate::fibered::{BaseForm, Connection, FiberedPatch};
use crate::linalg::{self, LinalgError};
use crate::symexpr::{Coefficient, Fraction, ScalarExpr};
use crate::tensorcalc::{DiffForm, Multivector};

use super::{CouplingError, GeometricData};

#[derive(Clone, Debug)]
pub struct PoissonExtraction {
    pub bivector: Multivector<Fraction>,
    /// Non-constant pivots met while inverting `𝔽`.
    pub pivot_denominators: Vec<ScalarExpr>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub data: GeometricData<Fraction>,
    pub pivot_denominators: Vec<ScalarExpr>,
}

fn to_fraction_matrix<C: Coefficient>(m: &[Vec<C>]) -> Vec<Vec<Fraction>> {
    m.iter()
        .map(|r| r.iter().map(Coefficient::to_fraction).collect())
        .collect()
}

/// Inverse or the determinant that blocks it.
fn invert(
    m: &[Vec<Fraction>],
    names: &[String],
) -> Result<linalg::Inverse, String> {
    let det = linalg::determinant(m);
    if det.is_zero() {
        return Err(det.render(names));
    }
    linalg::inverse(m).map_err(|e| match e {
        LinalgError::Singular { .. } | LinalgError::NotSquare => det.render(names),
    })
}

/// `Π = V + Σ_{a<b} W^{ab} hor(∂_a)∧hor(∂_b)` with `[W] = −[𝔽]⁻¹`, the
/// bivector whose graph is the coupling Dirac structure when `𝔽` is
/// nondegenerate.
pub fn extract_poisson<C: Coefficient>(
    data: &GeometricData<C>,
) -> Result<PoissonExtraction, CouplingError> {
    let fp = data.patch();
    let names = fp.names();
    let f = to_fraction_matrix(&data.two_form_matrix());
    let inv = invert(&f, &names).map_err(|determinant| CouplingError::Degenerate { determinant })?;
    let conn = data.connection().map_coeffs(|c| c.to_fraction());
    let lifts: Vec<Multivector<Fraction>> =
        (0..fp.n_base()).map(|a| conn.lift_basis(fp, a)).collect();
    let mut pi = data.bivector().to_fraction();
    for a in 0..fp.n_base() {
        for b in a + 1..fp.n_base() {
            let w = inv.entries[a][b].negated();
            if !w.is_zero() {
                pi = pi.plus(&lifts[a].wedge(&lifts[b]).times(&w));
            }
        }
    }
    Ok(PoissonExtraction {
        bivector: pi,
        pivot_denominators: inv.pivot_denominators,
    })
}

/// Splits a bivector transverse to the fibers into `(V, Γ, 𝔽)`: the base
/// block is `−𝔽⁻¹`, the mixed block is `−W Γᵀ`, and the rest is `V`.
pub fn decompose_coupling<C: Coefficient>(
    bivector: &Multivector<C>,
    fp: &Arc<FiberedPatch>,
) -> Result<Decomposition, CouplingError> {
    if bivector.degree() != 2 {
        return Err(CouplingError::Degree {
            what: "bivector",
            expected: 2,
            found: bivector.degree(),
        });
    }
    if bivector.dim() != fp.dim() {
        return Err(CouplingError::Dimension {
            what: "bivector",
            expected: fp.dim(),
            found: bivector.dim(),
        });
    }
    let names = fp.names();
    let pi = bivector.to_fraction();
    let (nb, nf) = (fp.n_base(), fp.n_fiber());
    let w: Vec<Vec<Fraction>> = (0..nb)
        .map(|a| {
            (0..nb)
                .map(|b| pi.get(&[fp.base_index(a), fp.base_index(b)]))
                .collect()
        })
        .collect();
    let winv =
        invert(&w, &names).map_err(|determinant| CouplingError::NotTransverse { determinant })?;
    // 𝔽 = −W⁻¹
    let mut two_form = DiffForm::zero(nb, 2);
    for a in 0..nb {
        for b in a + 1..nb {
            two_form.add_entry(&[a, b], winv.entries[a][b].negated());
        }
    }
    // Γ^u_b = Σ_a 𝔽_{ba} Π^{a u}
    let mut gamma = vec![vec![Fraction::zero(); nb]; nf];
    for (u, row) in gamma.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            *slot = (0..nb).fold(Fraction::zero(), |acc, a| {
                let fba = winv.entries[b][a].negated();
                let mixed = pi.get(&[fp.base_index(a), fp.fiber_index(u)]);
                acc.plus(&fba.times(&mixed))
            });
        }
    }
    let conn = Connection::new(fp, gamma)?;
    let lifts: Vec<Multivector<Fraction>> = (0..nb).map(|a| conn.lift_basis(fp, a)).collect();
    let mut vertical = pi.clone();
    for a in 0..nb {
        for b in a + 1..nb {
            let wab = &w[a][b];
            if !wab.is_zero() {
                vertical = vertical.minus(&lifts[a].wedge(&lifts[b]).times(wab));
            }
        }
    }
    if !fp.is_vertical(&vertical) {
        return Err(CouplingError::NonVerticalRemainder(vertical.render(&names)));
    }
    let data = GeometricData::new(
        fp.clone(),
        vertical,
        conn,
        BaseForm::from_table(two_form),
    )?;
    Ok(Decomposition {
        data,
        pivot_denominators: winv.pivot_denominators,
    })
}

/// Horizontal fields `hor(v)` with `i_{hor v} F̄ = 0`, one per null direction
/// of `[𝔽_{ab}]`.
pub fn characteristic_kernel<C: Coefficient>(
    data: &GeometricData<C>,
) -> Vec<Multivector<Fraction>> {
    let fp = data.patch();
    let f = to_fraction_matrix(&data.two_form_matrix());
    let conn = data.connection().map_coeffs(|c| c.to_fraction());
    linalg::null_space(&f)
        .into_iter()
        .map(|v| {
            v.iter().enumerate().fold(Multivector::zero(fp.dim(), 1), |acc, (a, c)| {
                if c.is_zero() {
                    acc
                } else {
                    acc.plus(&conn.lift_basis(fp, a).times(c))
                }
            })
        })
        .collect()
}

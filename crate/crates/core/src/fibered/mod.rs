//! Fibered coordinate patches, Ehresmann connections and horizontal forms.
//!
//! A connection is stored by its horizontal lifts:
//! `hor(∂_a) = ∂_a − Σ_u Γ^u_a ∂_u`, with horizontal annihilator
//! `η^u = dy^u + Σ_a Γ^u_a dx^a`.

use std::sync::Arc;

use thiserror::Error;

use crate::symexpr::{Coefficient, Patch, Role, ScalarExpr};
use crate::tensorcalc::{apply, lie_bracket, DiffForm, Multivector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberedError {
    #[error("a fibered patch needs at least one base and one fiber coordinate")]
    MissingRole,
    #[error("vector field has a component along fiber coordinate `{0}`")]
    FiberComponent(String),
    #[error("connection table has shape {found:?}, expected {expected:?}")]
    ConnectionShape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("tensor lives on dimension {found}, patch has dimension {expected}")]
    Dimension { expected: usize, found: usize },
}

/// Coordinates split into base `x^a` and fiber `y^u`, in patch order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberedPatch {
    patch: Patch,
    base: Vec<usize>,
    fiber: Vec<usize>,
}

impl FiberedPatch {
    pub fn new(patch: Patch) -> Result<Arc<Self>, FiberedError> {
        let pick = |r: Role| -> Vec<usize> {
            (0..patch.dim()).filter(|&i| patch.coord(i).role == r).collect()
        };
        let (base, fiber) = (pick(Role::Base), pick(Role::Fiber));
        if base.is_empty() || fiber.is_empty() {
            return Err(FiberedError::MissingRole);
        }
        Ok(Arc::new(Self { patch, base, fiber }))
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn dim(&self) -> usize {
        self.patch.dim()
    }

    pub fn n_base(&self) -> usize {
        self.base.len()
    }

    pub fn n_fiber(&self) -> usize {
        self.fiber.len()
    }

    /// Patch index of the `a`-th base coordinate.
    pub fn base_index(&self, a: usize) -> usize {
        self.base[a]
    }

    /// Patch index of the `u`-th fiber coordinate.
    pub fn fiber_index(&self, u: usize) -> usize {
        self.fiber[u]
    }

    pub fn base_indices(&self) -> &[usize] {
        &self.base
    }

    pub fn fiber_indices(&self) -> &[usize] {
        &self.fiber
    }

    /// Position among the base coordinates of patch index `i`.
    pub fn base_position(&self, i: usize) -> Option<usize> {
        self.base.iter().position(|&b| b == i)
    }

    pub fn fiber_position(&self, i: usize) -> Option<usize> {
        self.fiber.iter().position(|&f| f == i)
    }

    pub fn names(&self) -> Vec<String> {
        self.patch.names()
    }

    pub fn base_field<C: Coefficient>(&self, a: usize) -> Multivector<C> {
        Multivector::basis(self.dim(), &[self.base[a]])
    }

    pub fn fiber_field<C: Coefficient>(&self, u: usize) -> Multivector<C> {
        Multivector::basis(self.dim(), &[self.fiber[u]])
    }

    /// Every index of every entry is a fiber index.
    pub fn is_vertical<C: Coefficient>(&self, m: &Multivector<C>) -> bool {
        m.entries().all(|(idx, _)| idx.iter().all(|i| self.fiber.contains(i)))
    }

    /// `Tπ(X)`: the base components of a vector field.
    pub fn push_forward<C: Coefficient>(&self, field: &Multivector<C>) -> Multivector<C> {
        let mut out = Multivector::zero(self.dim(), 1);
        for &b in &self.base {
            out.add_entry(&[b], field.get(&[b]));
        }
        out
    }

    fn check_dim(&self, found: usize) -> Result<(), FiberedError> {
        if found == self.dim() {
            Ok(())
        } else {
            Err(FiberedError::Dimension {
                expected: self.dim(),
                found,
            })
        }
    }
}

/// Connection coefficients `Γ^u_a`, indexed `[u][a]` by fiber and base position.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<C: Coefficient = ScalarExpr> {
    coeffs: Vec<Vec<C>>,
}

impl<C: Coefficient> Connection<C> {
    pub fn flat(fp: &FiberedPatch) -> Self {
        Self {
            coeffs: vec![vec![C::zero(); fp.n_base()]; fp.n_fiber()],
        }
    }

    pub fn new(fp: &FiberedPatch, coeffs: Vec<Vec<C>>) -> Result<Self, FiberedError> {
        let found = (coeffs.len(), coeffs.first().map_or(0, Vec::len));
        let expected = (fp.n_fiber(), fp.n_base());
        if found.0 != expected.0 || coeffs.iter().any(|r| r.len() != expected.1) {
            return Err(FiberedError::ConnectionShape { expected, found });
        }
        Ok(Self { coeffs })
    }

    pub fn get(&self, u: usize, a: usize) -> &C {
        &self.coeffs[u][a]
    }

    pub fn set(&mut self, u: usize, a: usize, c: C) {
        self.coeffs[u][a] = c;
    }

    pub fn is_flat(&self) -> bool {
        self.coeffs.iter().flatten().all(C::is_zero)
    }

    pub fn coeffs(&self) -> &[Vec<C>] {
        &self.coeffs
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Connection<D> {
        Connection {
            coeffs: self.coeffs.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    /// `hor(∂_a)`.
    pub fn lift_basis(&self, fp: &FiberedPatch, a: usize) -> Multivector<C> {
        let mut out = fp.base_field(a);
        for u in 0..fp.n_fiber() {
            out.add_entry(&[fp.fiber_index(u)], self.coeffs[u][a].negated());
        }
        out
    }
}

/// Element of `Ω^k(B) ⊗ C∞(E)`: indices are base positions, coefficients
/// are functions on the whole patch.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseForm<C: Coefficient = ScalarExpr>(DiffForm<C>);

impl<C: Coefficient> BaseForm<C> {
    pub fn zero(fp: &FiberedPatch, degree: usize) -> Self {
        Self(DiffForm::zero(fp.n_base(), degree))
    }

    /// Wraps a table over base positions.
    pub fn from_table(table: DiffForm<C>) -> Self {
        Self(table)
    }

    pub fn table(&self) -> &DiffForm<C> {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    pub fn get(&self, bases: &[usize]) -> C {
        self.0.get(bases)
    }

    pub fn add_entry(&mut self, bases: &[usize], c: C) {
        self.0.add_entry(bases, c);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize], &C)> {
        self.0.entries()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self(self.0.plus(&other.0))
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> BaseForm<D> {
        BaseForm(self.0.map_coeffs(f))
    }
}

/// `hor(X) = Σ_a X^a hor(∂_a)` for a field with base components only.
pub fn horizontal_lift<C: Coefficient>(
    fp: &FiberedPatch,
    conn: &Connection<C>,
    field: &Multivector<C>,
) -> Result<Multivector<C>, FiberedError> {
    fp.check_dim(field.dim())?;
    if let Some(&u) = fp.fiber.iter().find(|&&u| !field.get(&[u]).is_zero()) {
        return Err(FiberedError::FiberComponent(fp.patch.coord(u).name.clone()));
    }
    let mut out = Multivector::zero(fp.dim(), 1);
    for a in 0..fp.n_base() {
        let xa = field.get(&[fp.base_index(a)]);
        if !xa.is_zero() {
            out = out.plus(&conn.lift_basis(fp, a).times(&xa));
        }
    }
    Ok(out)
}

/// `Σ_u (Y^u + Σ_a Γ^u_a Y^a) ∂_u`; kills horizontal lifts, fixes vertical fields.
pub fn vertical_projection<C: Coefficient>(
    fp: &FiberedPatch,
    conn: &Connection<C>,
    field: &Multivector<C>,
) -> Multivector<C> {
    let mut out = Multivector::zero(fp.dim(), 1);
    for u in 0..fp.n_fiber() {
        let mut c = field.get(&[fp.fiber_index(u)]);
        for a in 0..fp.n_base() {
            c = c.plus(&conn.get(u, a).times(&field.get(&[fp.base_index(a)])));
        }
        out.add_entry(&[fp.fiber_index(u)], c);
    }
    out
}

/// `Curv(X,Y) = hor([X,Y]) − [hor X, hor Y]`.
pub fn curvature<C: Coefficient>(
    fp: &FiberedPatch,
    conn: &Connection<C>,
    x: &Multivector<C>,
    y: &Multivector<C>,
) -> Result<Multivector<C>, FiberedError> {
    let hx = horizontal_lift(fp, conn, x)?;
    let hy = horizontal_lift(fp, conn, y)?;
    let hxy = horizontal_lift(fp, conn, &lie_bracket(x, y))?;
    Ok(hxy.minus(&lie_bracket(&hx, &hy)))
}

/// `Curv(∂_a, ∂_b)` on coordinate fields.
pub fn curvature_basis<C: Coefficient>(
    fp: &FiberedPatch,
    conn: &Connection<C>,
    a: usize,
    b: usize,
) -> Multivector<C> {
    lie_bracket(&conn.lift_basis(fp, a), &conn.lift_basis(fp, b)).negated()
}

/// The twisted differential `∂_Γ`: the Koszul formula evaluated on coordinate
/// base fields, where all brackets vanish and only `hor(∂_a)` acts.
pub fn d_gamma<C: Coefficient>(
    fp: &FiberedPatch,
    conn: &Connection<C>,
    form: &BaseForm<C>,
) -> BaseForm<C> {
    let lifts: Vec<Multivector<C>> = (0..fp.n_base()).map(|a| conn.lift_basis(fp, a)).collect();
    let mut out = DiffForm::zero(fp.n_base(), form.degree() + 1);
    for (idx, c) in form.entries() {
        for (a, lift) in lifts.iter().enumerate() {
            if idx.contains(&a) {
                continue;
            }
            let hc = apply(lift, c);
            if hc.is_zero() {
                continue;
            }
            let before = idx.iter().filter(|&&i| i < a).count();
            let mut new_idx = idx.to_vec();
            new_idx.insert(before, a);
            out.add_entry(&new_idx, if before % 2 == 1 { hc.negated() } else { hc });
        }
    }
    BaseForm(out)
}

/// `F̄ = Σ 𝔽_{a…} dx^a∧…`: the horizontal form on the total patch whose
/// values on horizontal lifts are those of `𝔽` and which vanishes on
/// vertical vectors. The horizontal coframe dual to `hor(∂_a)` is `dx^a`.
pub fn promote<C: Coefficient>(fp: &FiberedPatch, form: &BaseForm<C>) -> DiffForm<C> {
    let mut out = DiffForm::zero(fp.dim(), form.degree());
    for (idx, c) in form.entries() {
        let total: Vec<usize> = idx.iter().map(|&a| fp.base_index(a)).collect();
        out.add_entry(&total, c.clone());
    }
    out
}

/// `η^u = dy^u + Σ_a Γ^u_a dx^a`, one per fiber coordinate.
pub fn ann_hor_basis<C: Coefficient>(fp: &FiberedPatch, conn: &Connection<C>) -> Vec<DiffForm<C>> {
    (0..fp.n_fiber())
        .map(|u| {
            let mut eta = DiffForm::basis(fp.dim(), &[fp.fiber_index(u)]);
            for a in 0..fp.n_base() {
                eta.add_entry(&[fp.base_index(a)], conn.get(u, a).clone());
            }
            eta
        })
        .collect()
}

#[cfg(test)]
mod tests;

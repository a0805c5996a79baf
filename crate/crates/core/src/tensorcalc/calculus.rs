use crate::symexpr::{Coefficient, Rational};

use super::{DiffForm, Multivector, TensorError};

fn sign<C: Coefficient>(odd: bool, c: C) -> C {
    if odd {
        c.negated()
    } else {
        c
    }
}

/// `df` for a function `f` on a patch of dimension `dim`.
pub fn differential<C: Coefficient>(dim: usize, f: &C) -> DiffForm<C> {
    let mut out = DiffForm::zero(dim, 1);
    for j in 0..dim {
        out.add_entry(&[j], f.diff(j));
    }
    out
}

pub fn exterior_derivative<C: Coefficient>(form: &DiffForm<C>) -> DiffForm<C> {
    let dim = form.dim();
    let mut out = DiffForm::zero(dim, form.degree() + 1);
    for (idx, c) in form.entries() {
        for j in 0..dim {
            if idx.contains(&j) {
                continue;
            }
            let dc = c.diff(j);
            if dc.is_zero() {
                continue;
            }
            // dx^j ∧ dx^I, moved into place past the entries below j
            let before = idx.iter().filter(|&&i| i < j).count();
            let mut new_idx = idx.to_vec();
            new_idx.insert(before, j);
            out.add_entry(&new_idx, sign(before % 2 == 1, dc));
        }
    }
    out
}

/// `i_X ω` for a vector field `X`.
pub fn interior<C: Coefficient>(field: &Multivector<C>, form: &DiffForm<C>) -> DiffForm<C> {
    assert_eq!(field.degree(), 1, "interior product needs a vector field");
    assert_eq!(field.dim(), form.dim(), "tensors on patches of different dimension");
    if form.degree() == 0 {
        return DiffForm::zero(form.dim(), 0);
    }
    let mut out = DiffForm::zero(form.dim(), form.degree() - 1);
    for (idx, c) in form.entries() {
        for (m, &i) in idx.iter().enumerate() {
            let x = field.get(&[i]);
            if x.is_zero() {
                continue;
            }
            let mut rest = idx.to_vec();
            rest.remove(m);
            out.add_entry(&rest, sign(m % 2 == 1, x.times(c)));
        }
    }
    out
}

/// `i_P ω` for a `p`-vector `P`, with `i_{X₁∧…∧X_p} = i_{X_p} ∘ … ∘ i_{X₁}`:
/// the first factor is inserted first, so `i_{∂q∧∂p}(dq∧dp) = 1`.
pub fn contract<C: Coefficient>(
    multivector: &Multivector<C>,
    form: &DiffForm<C>,
) -> Result<DiffForm<C>, TensorError> {
    let (p, k) = (multivector.degree(), form.degree());
    if p > k {
        return Err(TensorError::ContractionDegree {
            multivector: p,
            form: k,
        });
    }
    let dim = form.dim();
    let mut out = DiffForm::zero(dim, k - p);
    for (idx, c) in multivector.entries() {
        let mut acc = form.clone();
        for &i in idx {
            acc = interior(&Multivector::basis(dim, &[i]), &acc);
        }
        out = out.plus(&acc.times(c));
    }
    Ok(out)
}

/// `ξ(X)` for a 1-form and a vector field.
pub fn evaluate<C: Coefficient>(form: &DiffForm<C>, field: &Multivector<C>) -> C {
    assert_eq!(form.degree(), 1, "evaluate needs a 1-form");
    assert_eq!(field.degree(), 1, "evaluate needs a vector field");
    form.entries().fold(C::zero(), |acc, (idx, c)| {
        acc.plus(&c.times(&field.get(idx)))
    })
}

/// `X(f)`.
pub fn apply<C: Coefficient>(field: &Multivector<C>, f: &C) -> C {
    assert_eq!(field.degree(), 1, "apply needs a vector field");
    field
        .entries()
        .fold(C::zero(), |acc, (idx, x)| acc.plus(&x.times(&f.diff(idx[0]))))
}

/// `[X,Y]^i = X^j ∂_j Y^i − Y^j ∂_j X^i`.
pub fn lie_bracket<C: Coefficient>(x: &Multivector<C>, y: &Multivector<C>) -> Multivector<C> {
    assert_eq!(x.degree(), 1, "lie_bracket needs vector fields");
    assert_eq!(y.degree(), 1, "lie_bracket needs vector fields");
    let dim = x.dim();
    let mut out = Multivector::zero(dim, 1);
    for i in 0..dim {
        let c = apply(x, &y.get(&[i])).minus(&apply(y, &x.get(&[i])));
        out.add_entry(&[i], c);
    }
    out
}

/// Right derivative `P ←∂/∂ξ_i` of a multivector seen as a superfunction.
fn right_derivative<C: Coefficient>(m: &Multivector<C>, i: usize) -> Option<Multivector<C>> {
    let p = m.degree();
    if p == 0 {
        return None;
    }
    let mut out = Multivector::zero(m.dim(), p - 1);
    for (idx, c) in m.entries() {
        if let Some(k) = idx.iter().position(|&j| j == i) {
            let mut rest = idx.to_vec();
            rest.remove(k);
            out.add_entry(&rest, sign((p - 1 - k) % 2 == 1, c.clone()));
        }
    }
    (!out.is_zero()).then_some(out)
}

/// Schouten–Nijenhuis bracket, normalized so `[X,f] = X(f)` and `[X,Y]` is the
/// Lie bracket. Two functions bracket to the zero function.
pub fn schouten<C: Coefficient>(a: &Multivector<C>, b: &Multivector<C>) -> Multivector<C> {
    assert_eq!(a.dim(), b.dim(), "tensors on patches of different dimension");
    let (p, q) = (a.degree(), b.degree());
    let dim = a.dim();
    if p + q == 0 {
        return Multivector::zero(dim, 0);
    }
    let mut out = Multivector::zero(dim, p + q - 1);
    // (−1)^{(p−1)(q−1)} is −1 exactly when p and q are both even
    let flip = p % 2 == 0 && q % 2 == 0;
    for i in 0..dim {
        if let Some(ra) = right_derivative(a, i) {
            let db = b.diff(i);
            if !db.is_zero() {
                out = out.plus(&ra.wedge(&db));
            }
        }
        if let Some(rb) = right_derivative(b, i) {
            let da = a.diff(i);
            if !da.is_zero() {
                let term = rb.wedge(&da);
                out = if flip { out.plus(&term) } else { out.minus(&term) };
            }
        }
    }
    out
}

/// `V♯α = Σ_{i<j} V^{ij}(α_i ∂_j − α_j ∂_i)`.
pub fn sharp<C: Coefficient>(bivector: &Multivector<C>, alpha: &DiffForm<C>) -> Multivector<C> {
    assert_eq!(bivector.degree(), 2, "sharp needs a bivector");
    assert_eq!(alpha.degree(), 1, "sharp needs a 1-form");
    let mut out = Multivector::zero(bivector.dim(), 1);
    for (idx, v) in bivector.entries() {
        let (i, j) = (idx[0], idx[1]);
        out.add_entry(&[j], v.times(&alpha.get(&[i])));
        out.add_entry(&[i], v.times(&alpha.get(&[j])).negated());
    }
    out
}

/// `V(α, β) = Σ_{i<j} V^{ij}(α_i β_j − α_j β_i)`.
pub fn bivector_eval<C: Coefficient>(
    bivector: &Multivector<C>,
    alpha: &DiffForm<C>,
    beta: &DiffForm<C>,
) -> C {
    evaluate(beta, &sharp(bivector, alpha))
}

/// Hamiltonian vector field `X_f = V♯df`.
pub fn hamiltonian<C: Coefficient>(bivector: &Multivector<C>, f: &C) -> Multivector<C> {
    sharp(bivector, &differential(bivector.dim(), f))
}

/// `{f,g} = V(df, dg)`.
pub fn poisson_bracket<C: Coefficient>(bivector: &Multivector<C>, f: &C, g: &C) -> C {
    apply(&hamiltonian(bivector, f), g)
}

/// Lie derivative along a vector field, on forms or multivectors.
pub trait LieDerivative<C: Coefficient>: Sized {
    fn lie_derivative(&self, field: &Multivector<C>) -> Self;
}

impl<C: Coefficient> LieDerivative<C> for DiffForm<C> {
    /// Cartan formula `i_X d + d i_X`.
    fn lie_derivative(&self, field: &Multivector<C>) -> Self {
        let a = interior(field, &exterior_derivative(self));
        if self.degree() == 0 {
            return a;
        }
        a.plus(&exterior_derivative(&interior(field, self)))
    }
}

impl<C: Coefficient> LieDerivative<C> for Multivector<C> {
    fn lie_derivative(&self, field: &Multivector<C>) -> Self {
        schouten(field, self)
    }
}

pub fn lie_derivative<C: Coefficient, T: LieDerivative<C>>(field: &Multivector<C>, target: &T) -> T {
    target.lie_derivative(field)
}

/// Half of the sum, used by the symmetric pairing.
pub(crate) fn half<C: Coefficient>(c: &C) -> C {
    c.scaled(&Rational::new(1.into(), 2.into()))
}

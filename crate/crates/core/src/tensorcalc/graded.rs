use std::collections::BTreeMap;
use std::fmt::Debug;
use std::marker::PhantomData;

use crate::symexpr::{Coefficient, Fraction, Rational, ScalarExpr};

/// Marker for a graded table's variance.
pub trait Kind: Clone + Copy + Debug + Default + PartialEq + Eq + Send + Sync + 'static {
    /// Prefix used when printing a basis element, `d` for `∂x` and `dx` for `dx`.
    const BASIS: &'static str;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Vectors;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Forms;

impl Kind for Vectors {
    const BASIS: &'static str = "d_";
}

impl Kind for Forms {
    const BASIS: &'static str = "d";
}

/// Sparse antisymmetric table: strictly increasing index tuples to nonzero
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Graded<K: Kind, C: Coefficient = ScalarExpr> {
    dim: usize,
    degree: usize,
    entries: BTreeMap<Vec<usize>, C>,
    kind: PhantomData<K>,
}

/// Multivector field of any degree; degree 1 is a vector field.
pub type Multivector<C = ScalarExpr> = Graded<Vectors, C>;
/// Differential form of any degree.
pub type DiffForm<C = ScalarExpr> = Graded<Forms, C>;

/// Sorts `idx` in place and returns the permutation sign, or `None` on a repeat.
pub(crate) fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(odd)
    }
}

impl<K: Kind, C: Coefficient> Graded<K, C> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            entries: BTreeMap::new(),
            kind: PhantomData,
        }
    }

    pub fn scalar(dim: usize, c: C) -> Self {
        let mut out = Self::zero(dim, 0);
        out.add_entry(&[], c);
        out
    }

    /// The coordinate basis element on `indices` (in the given order).
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        let mut out = Self::zero(dim, indices.len());
        out.add_entry(indices, C::one());
        out
    }

    pub fn from_entries(
        dim: usize,
        degree: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, C)>,
    ) -> Self {
        let mut out = Self::zero(dim, degree);
        for (idx, c) in entries {
            out.add_entry(&idx, c);
        }
        out
    }

    /// Adds `c` times the basis element on `indices`, reordering with sign.
    pub fn add_entry(&mut self, indices: &[usize], c: C) {
        assert_eq!(indices.len(), self.degree, "index tuple length must equal the degree");
        assert!(indices.iter().all(|&i| i < self.dim), "index out of range");
        if c.is_zero() {
            return;
        }
        let mut idx = indices.to_vec();
        let Some(odd) = sort_with_sign(&mut idx) else {
            return;
        };
        let c = if odd { c.negated() } else { c };
        match self.entries.get_mut(&idx) {
            Some(v) => {
                let sum = v.plus(&c);
                if sum.is_zero() {
                    self.entries.remove(&idx);
                } else {
                    *v = sum;
                }
            }
            None => {
                self.entries.insert(idx, c);
            }
        }
    }

    /// Coefficient on `indices` in any order (antisymmetrized).
    pub fn get(&self, indices: &[usize]) -> C {
        let mut idx = indices.to_vec();
        match sort_with_sign(&mut idx) {
            None => C::zero(),
            Some(odd) => match self.entries.get(&idx) {
                None => C::zero(),
                Some(c) if odd => c.negated(),
                Some(c) => c.clone(),
            },
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize], &C)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The degree-0 value.
    pub fn as_scalar(&self) -> C {
        assert_eq!(self.degree, 0, "as_scalar on positive degree");
        self.get(&[])
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "tensors on patches of different dimension");
        assert_eq!(self.degree, other.degree, "sum of tensors of different degree");
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.add_entry(k, v.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    pub fn negated(&self) -> Self {
        self.map(|c| c.negated())
    }

    /// Multiplies every coefficient by the function `f`.
    pub fn times(&self, f: &C) -> Self {
        self.map(|c| c.times(f))
    }

    pub fn scaled(&self, r: &Rational) -> Self {
        self.map(|c| c.scaled(r))
    }

    /// Componentwise partial derivative along coordinate `var`.
    pub fn diff(&self, var: usize) -> Self {
        self.map(|c| c.diff(var))
    }

    fn map(&self, f: impl Fn(&C) -> C) -> Self {
        Self {
            dim: self.dim,
            degree: self.degree,
            entries: self
                .entries
                .iter()
                .filter_map(|(k, v)| {
                    let w = f(v);
                    (!w.is_zero()).then(|| (k.clone(), w))
                })
                .collect(),
            kind: PhantomData,
        }
    }

    /// Changes the coefficient ring entry by entry.
    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Graded<K, D> {
        Graded {
            dim: self.dim,
            degree: self.degree,
            entries: self
                .entries
                .iter()
                .filter_map(|(k, v)| {
                    let w = f(v);
                    (!w.is_zero()).then(|| (k.clone(), w))
                })
                .collect(),
            kind: PhantomData,
        }
    }

    pub fn to_fraction(&self) -> Graded<K, Fraction> {
        self.map_coeffs(|c| c.to_fraction())
    }

    /// Exterior product; degrees add.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "tensors on patches of different dimension");
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (a, ca) in &self.entries {
            for (b, cb) in &other.entries {
                if a.iter().any(|i| b.contains(i)) {
                    continue;
                }
                let idx: Vec<usize> = a.iter().chain(b).copied().collect();
                out.add_entry(&idx, ca.times(cb));
            }
        }
        out
    }

    /// Human-readable sum such as `x1*d_q^d_p + d_x1^d_x2`.
    pub fn render(&self, names: &[String]) -> String {
        if self.entries.is_empty() {
            return "0".to_string();
        }
        self.entries
            .iter()
            .map(|(idx, c)| {
                let basis = idx
                    .iter()
                    .map(|&i| format!("{}{}", K::BASIS, names[i]))
                    .collect::<Vec<_>>()
                    .join("^");
                if idx.is_empty() {
                    format!("({})", c.render(names))
                } else {
                    format!("({})*{basis}", c.render(names))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<K: Kind> Graded<K, Fraction> {
    /// Back to ring coefficients when every denominator is constant.
    pub fn to_ring(&self) -> Option<Graded<K, ScalarExpr>> {
        let mut out = Graded::zero(self.dim, self.degree);
        for (k, v) in &self.entries {
            out.add_entry(k, v.to_expr()?);
        }
        Some(out)
    }
}

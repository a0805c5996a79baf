use std::fmt::Debug;

use super::{Fraction, Rational, ScalarExpr};

/// The commutative differential ring the tensor calculus is generic over.
///
/// Implemented by [`ScalarExpr`] (the trig-polynomial ring) and by
/// [`Fraction`] (its field of fractions).
pub trait Coefficient: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: Rational) -> Self;
    fn from_expr(e: ScalarExpr) -> Self;

    fn is_zero(&self) -> bool;
    fn as_rational(&self) -> Option<Rational>;

    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;

    /// Partial derivative along coordinate `var`.
    fn diff(&self, var: usize) -> Self;

    fn render(&self, names: &[String]) -> String;
    fn to_fraction(&self) -> Fraction;

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    fn scaled(&self, r: &Rational) -> Self {
        self.times(&Self::from_rational(r.clone()))
    }
}

impl Coefficient for ScalarExpr {
    fn zero() -> Self {
        ScalarExpr::zero()
    }
    fn one() -> Self {
        ScalarExpr::one()
    }
    fn from_rational(r: Rational) -> Self {
        ScalarExpr::constant(r)
    }
    fn from_expr(e: ScalarExpr) -> Self {
        e
    }
    fn is_zero(&self) -> bool {
        ScalarExpr::is_zero(self)
    }
    fn as_rational(&self) -> Option<Rational> {
        self.as_constant()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub_ref(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn negated(&self) -> Self {
        self.neg_ref()
    }
    fn diff(&self, var: usize) -> Self {
        ScalarExpr::diff(self, var)
    }
    fn render(&self, names: &[String]) -> String {
        ScalarExpr::render(self, names)
    }
    fn to_fraction(&self) -> Fraction {
        Fraction::from(self.clone())
    }
    fn scaled(&self, r: &Rational) -> Self {
        self.scale(r)
    }
}

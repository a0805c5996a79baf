use num_traits::{One, Zero};

use super::{Coefficient, Rational, ScalarExpr};
use crate::symexpr::FourierWord;

/// Element of the fraction field of the trig-polynomial ring.
///
/// Kept as `num / den` with light normalization (exact division when the
/// denominator divides, monomial and rational content cancelled). Equality is
/// decided by cross-multiplication, which is exact because the ring is an
/// integral domain.
#[derive(Clone, Debug)]
pub struct Fraction {
    num: ScalarExpr,
    den: ScalarExpr,
}

impl Fraction {
    /// Panics if `den` is zero.
    pub fn new(num: ScalarExpr, den: ScalarExpr) -> Self {
        assert!(!den.is_zero(), "fraction with zero denominator");
        Self { num, den }.normalized()
    }

    pub fn numer(&self) -> &ScalarExpr {
        &self.num
    }

    pub fn denom(&self) -> &ScalarExpr {
        &self.den
    }

    /// The ring element, when the denominator is a constant.
    pub fn to_expr(&self) -> Option<ScalarExpr> {
        self.den
            .as_constant()
            .map(|c| self.num.scale(&c.recip()))
    }

    fn normalized(self) -> Self {
        let Self { num, den } = self;
        if num.is_zero() {
            return Self {
                num,
                den: ScalarExpr::one(),
            };
        }
        if let Some(q) = num.exact_div(&den) {
            return Self {
                num: q,
                den: ScalarExpr::one(),
            };
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            let gm = ScalarExpr::term(Rational::one(), g, FourierWord::one());
            (
                num.exact_div(&gm).expect("monomial content divides"),
                den.exact_div(&gm).expect("monomial content divides"),
            )
        };
        let lead = den.leading_coefficient().cloned().unwrap_or_else(Rational::one);
        let inv = lead.recip();
        Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.num.is_zero()).then(|| Self::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| self.times(&r))
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.num.eval(point) / self.den.eval(point)
    }
}

impl From<ScalarExpr> for Fraction {
    fn from(e: ScalarExpr) -> Self {
        Self {
            num: e,
            den: ScalarExpr::one(),
        }
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul_ref(&other.den) == other.num.mul_ref(&self.den)
    }
}

impl Coefficient for Fraction {
    fn zero() -> Self {
        ScalarExpr::zero().into()
    }
    fn one() -> Self {
        ScalarExpr::one().into()
    }
    fn from_rational(r: Rational) -> Self {
        ScalarExpr::constant(r).into()
    }
    fn from_expr(e: ScalarExpr) -> Self {
        e.into()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn as_rational(&self) -> Option<Rational> {
        self.to_expr().and_then(|e| e.as_constant())
    }
    fn plus(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(self.num.add_ref(&other.num), self.den.clone());
        }
        Self::new(
            self.num.mul_ref(&other.den).add_ref(&other.num.mul_ref(&self.den)),
            self.den.mul_ref(&other.den),
        )
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
    fn times(&self, other: &Self) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul_ref(&other.num), self.den.mul_ref(&other.den))
    }
    fn negated(&self) -> Self {
        Self {
            num: self.num.neg_ref(),
            den: self.den.clone(),
        }
    }
    fn diff(&self, var: usize) -> Self {
        let dn = self.num.diff(var);
        let dd = self.den.diff(var);
        if dd.is_zero() {
            return Self::new(dn, self.den.clone());
        }
        // (n'd - nd') / d²; try to cancel one factor of d first
        let top = dn.mul_ref(&self.den).sub_ref(&self.num.mul_ref(&dd));
        match top.exact_div(&self.den) {
            Some(q) => Self::new(q, self.den.clone()),
            None => Self::new(top, self.den.mul_ref(&self.den)),
        }
    }
    fn render(&self, names: &[String]) -> String {
        match self.to_expr() {
            Some(e) => e.render(names),
            None => format!("({})/({})", self.num.render(names), self.den.render(names)),
        }
    }
    fn to_fraction(&self) -> Fraction {
        self.clone()
    }
    fn scaled(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(r),
            den: self.den.clone(),
        }
    }
}

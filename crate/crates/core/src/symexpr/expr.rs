use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::trig::{FourierWord, TrigFactor};
use super::{ExprError, Rational};

/// Product of powers of non-angle coordinates, sorted by coordinate index.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: usize) -> Self {
        Self(vec![(v, 1)])
    }

    pub fn powers(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0
            .iter()
            .find(|(v, _)| *v == var)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Self(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::new();
        let mut j = 0;
        for &(v, e) in &self.0 {
            let mut e = e;
            if j < other.0.len() && other.0[j].0 == v {
                if other.0[j].1 > e {
                    return None;
                }
                e -= other.0[j].1;
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if e > 0 {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Self(out))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .filter_map(|&(v, e)| {
                    let f = other.exponent(v);
                    (f > 0).then(|| (v, e.min(f)))
                })
                .collect(),
        )
    }

    fn diff(&self, var: usize) -> Option<(u32, Monomial)> {
        let pos = self.0.iter().position(|(v, _)| *v == var)?;
        let mut m = self.0.clone();
        let e = m[pos].1;
        if e == 1 {
            m.remove(pos);
        } else {
            m[pos].1 -= 1;
        }
        Some((e, Self(m)))
    }

    /// Graded lexicographic comparison (a monomial order, unlike the storage order).
    fn grlex_cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.0.get(i), other.0.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(a), Some(b)) => {
                        if a.0 != b.0 {
                            // smaller variable index present means larger in lex
                            return b.0.cmp(&a.0);
                        }
                        if a.1 != b.1 {
                            return a.1.cmp(&b.1);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        })
    }
}

type TermKey = (Monomial, FourierWord);

/// Canonical trig-polynomial: a sparse sum of `rational × monomial × Fourier word`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScalarExpr {
    terms: BTreeMap<TermKey, Rational>,
}

/// Replacement for a coordinate in [`ScalarExpr::substitute`].
#[derive(Clone, Debug, PartialEq)]
pub enum Substitution {
    /// Polynomial occurrences are replaced by this expression.
    Value(ScalarExpr),
    /// Angle occurrences are renamed to this angle coordinate index.
    Angle(usize),
}

impl ScalarExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((Monomial::one(), FourierWord::one()), c);
        }
        Self { terms }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(Rational::new(n.into(), d.into()))
    }

    pub fn var(v: usize) -> Self {
        Self::term(Rational::one(), Monomial::var(v), FourierWord::one())
    }

    pub fn cos(v: usize, freq: u32) -> Self {
        if freq == 0 {
            return Self::one();
        }
        Self::term(
            Rational::one(),
            Monomial::one(),
            FourierWord::single(v, super::Wave::Cos, freq),
        )
    }

    pub fn sin(v: usize, freq: u32) -> Self {
        if freq == 0 {
            return Self::zero();
        }
        Self::term(
            Rational::one(),
            Monomial::one(),
            FourierWord::single(v, super::Wave::Sin, freq),
        )
    }

    pub fn term(c: Rational, m: Monomial, w: FourierWord) -> Self {
        let mut e = Self::zero();
        e.accumulate((m, w), c);
        e
    }

    fn accumulate(&mut self, key: TermKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FourierWord, &Rational)> {
        self.terms.iter().map(|((m, w), c)| (m, w, c))
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let ((m, w), c) = self.terms.iter().next()?;
                (m.is_one() && w.is_one()).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Coordinates occurring polynomially.
    pub fn polynomial_vars(&self) -> BTreeSet<usize> {
        self.terms
            .keys()
            .flat_map(|(m, _)| m.powers().iter().map(|(v, _)| *v))
            .collect()
    }

    /// Coordinates occurring inside trig factors.
    pub fn angle_vars(&self) -> BTreeSet<usize> {
        self.terms
            .keys()
            .flat_map(|(_, w)| w.factors().iter().map(|f| f.var))
            .collect()
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut s = self.polynomial_vars();
        s.extend(self.angle_vars());
        s
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms
            .keys()
            .any(|(m, w)| m.exponent(var) > 0 || w.contains(var))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), c.clone());
        }
        out
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), -c.clone());
        }
        out
    }

    pub fn neg_ref(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((m1, w1), c1) in &self.terms {
            for ((m2, w2), c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                if w1.is_one() {
                    out.accumulate((m, w2.clone()), c);
                } else if w2.is_one() {
                    out.accumulate((m, w1.clone()), c);
                } else {
                    for (c3, w) in w1.mul(w2) {
                        out.accumulate((m.clone(), w), &c * c3);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    pub fn diff(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for ((m, w), c) in &self.terms {
            if let Some((e, m2)) = m.diff(var) {
                out.accumulate((m2, w.clone()), c * Rational::from_integer(e.into()));
            }
            if let Some((k, w2)) = w.diff(var) {
                out.accumulate((m.clone(), w2), c * k);
            }
        }
        out
    }

    /// Drops every term oscillating in `angle`; the Fourier constant term.
    pub fn average_over(&self, angle: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|((_, w), _)| !w.contains(angle))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Simultaneous substitution. Untouched coordinates keep their index.
    pub fn substitute(
        &self,
        assignments: &BTreeMap<usize, Substitution>,
        names: &[String],
    ) -> Result<Self, ExprError> {
        for (&v, s) in assignments {
            let name = || names.get(v).cloned().unwrap_or_else(|| format!("#{v}"));
            match s {
                Substitution::Value(_) if self.angle_vars().contains(&v) => {
                    return Err(ExprError::AngleAssignedValue(name()))
                }
                Substitution::Angle(_) if self.polynomial_vars().contains(&v) => {
                    return Err(ExprError::PolynomialToAngle(name()))
                }
                _ => {}
            }
        }
        let mut out = Self::zero();
        let mut power_cache: BTreeMap<(usize, u32), Self> = BTreeMap::new();
        for ((m, w), c) in &self.terms {
            let mut kept = Vec::new();
            let mut factor = Self::one();
            for &(v, e) in m.powers() {
                match assignments.get(&v) {
                    Some(Substitution::Value(val)) => {
                        let p = power_cache
                            .entry((v, e))
                            .or_insert_with(|| val.pow(e))
                            .clone();
                        factor = factor.mul_ref(&p);
                    }
                    _ => kept.push((v, e)),
                }
            }
            let word = w.remap(|v| match assignments.get(&v) {
                Some(Substitution::Angle(t)) => *t,
                _ => v,
            });
            let mono = Monomial(kept);
            // renaming may merge factors on the same target angle
            let mut base = Self::constant(c.clone());
            base = base.mul_ref(&Self::term(Rational::one(), mono, FourierWord::one()));
            let mut trig = Self::one();
            for f in word.factors() {
                trig = trig.mul_ref(&Self::term(
                    Rational::one(),
                    Monomial::one(),
                    FourierWord::single(f.var, f.wave, f.freq),
                ));
            }
            out = out.add_ref(&base.mul_ref(&trig).mul_ref(&factor));
        }
        Ok(out)
    }

    /// Renames coordinate indices; `map` must be injective on the used variables.
    pub fn reindex(&self, map: impl Fn(usize) -> usize) -> Self {
        let mut out = Self::zero();
        for ((m, w), c) in &self.terms {
            let mut p: Vec<(usize, u32)> = m.powers().iter().map(|&(v, e)| (map(v), e)).collect();
            p.sort();
            out.accumulate((Monomial(p), w.remap(&map)), c.clone());
        }
        out
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|((m, w), c)| {
                let mono: f64 = m
                    .powers()
                    .iter()
                    .map(|&(v, e)| point[v].powi(e as i32))
                    .product();
                c.to_f64().unwrap_or(f64::NAN) * mono * w.eval(point)
            })
            .sum()
    }

    /// Exact quotient in the ring, when the divisor has no angle dependence
    /// (or is a nonzero constant) and divides every Fourier component.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if !d.angle_vars().is_empty() {
            return None;
        }
        let divisor: Vec<(Monomial, Rational)> = d
            .terms
            .iter()
            .map(|((m, _), c)| (m.clone(), c.clone()))
            .collect();
        let (lead_m, lead_c) = divisor
            .iter()
            .max_by(|a, b| a.0.grlex_cmp(&b.0))
            .cloned()
            .expect("nonzero divisor");
        let mut by_word: BTreeMap<FourierWord, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for ((m, w), c) in &self.terms {
            by_word
                .entry(w.clone())
                .or_default()
                .push((m.clone(), c.clone()));
        }
        let mut quotient = Self::zero();
        for (word, poly) in by_word {
            let mut rem: BTreeMap<Monomial, Rational> = poly.into_iter().collect();
            while let Some((m, c)) = rem
                .iter()
                .max_by(|a, b| a.0.grlex_cmp(b.0))
                .map(|(m, c)| (m.clone(), c.clone()))
            {
                let qm = m.div(&lead_m)?;
                let qc = &c / &lead_c;
                for (dm, dc) in &divisor {
                    let key = dm.mul(&qm);
                    let v = rem.entry(key.clone()).or_insert_with(Rational::zero);
                    *v -= &qc * dc;
                    if v.is_zero() {
                        rem.remove(&key);
                    }
                }
                quotient.accumulate((qm, word.clone()), qc);
            }
        }
        Some(quotient)
    }

    /// Greatest common monomial factor over all terms (non-angle part only).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |acc, (m, _)| acc.gcd(m))
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    /// Canonical text in the expression grammar, terms in storage order.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, ((m, w), c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for &(v, e) in m.powers() {
                if e == 1 {
                    factors.push(names[v].clone());
                } else {
                    factors.push(format!("{}^{}", names[v], e));
                }
            }
            for f in w.factors() {
                factors.push(render_trig(f, names));
            }
            if factors.is_empty() {
                out.push_str(&render_rational(&mag));
            } else {
                if !mag.is_one() {
                    let _ = write!(out, "{}*", render_rational(&mag));
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

fn render_rational(r: &Rational) -> String {
    if r.denom() == &BigInt::one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn render_trig(f: &TrigFactor, names: &[String]) -> String {
    let fun = match f.wave {
        super::Wave::Cos => "cos",
        super::Wave::Sin => "sin",
    };
    if f.freq == 1 {
        format!("{fun}({})", names[f.var])
    } else {
        format!("{fun}({}*{})", f.freq, names[f.var])
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                self.$inner(&rhs)
            }
        }
        impl<'a> $tr<&'a ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &'a ScalarExpr) -> ScalarExpr {
                self.$inner(rhs)
            }
        }
        impl<'a, 'b> $tr<&'b ScalarExpr> for &'a ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &'b ScalarExpr) -> ScalarExpr {
                self.$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        self.neg_ref()
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        self.neg_ref()
    }
}

impl From<i64> for ScalarExpr {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl From<Rational> for ScalarExpr {
    fn from(r: Rational) -> Self {
        Self::constant(r)
    }
}

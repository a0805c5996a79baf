//! Exact scalar coefficients: trigonometric polynomials over the rationals.
//!
//! Polynomial dependence is allowed only on non-angle coordinates; angle
//! coordinates enter through `sin(kθ)` / `cos(kθ)` factors kept in Fourier
//! normal form. Every expression has a unique canonical form, so equality and
//! the zero test are structural.

mod coeff;
mod expr;
mod fraction;
mod parse;
mod trig;

pub use coeff::Coefficient;
pub use expr::{Monomial, ScalarExpr, Substitution};
pub use fraction::Fraction;
pub use parse::{parse, ParseError, ParseErrorKind};
pub use trig::{FourierWord, TrigFactor, Wave};

use std::collections::HashSet;

use thiserror::Error;

pub type Rational = num_rational::BigRational;

/// Whether a coordinate parametrizes the base or the typical fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Base,
    Fiber,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Base => "base",
            Role::Fiber => "fiber",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coordinate {
    pub name: String,
    pub role: Role,
    /// Periodic coordinate; may only appear inside `sin`/`cos`.
    pub angle: bool,
}

impl Coordinate {
    pub fn new(name: impl Into<String>, role: Role, angle: bool) -> Self {
        Self {
            name: name.into(),
            role,
            angle,
        }
    }

    pub fn base(name: impl Into<String>) -> Self {
        Self::new(name, Role::Base, false)
    }

    pub fn fiber(name: impl Into<String>) -> Self {
        Self::new(name, Role::Fiber, false)
    }

    pub fn fiber_angle(name: impl Into<String>) -> Self {
        Self::new(name, Role::Fiber, true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("duplicate coordinate name `{0}`")]
    DuplicateCoordinate(String),
    #[error("invalid coordinate name `{0}`")]
    InvalidName(String),
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("`{0}` is not an angle coordinate")]
    NotAngle(String),
    #[error("angle coordinate `{0}` cannot be assigned a value; map it to another angle")]
    AngleAssignedValue(String),
    #[error("coordinate `{0}` appears polynomially and cannot be mapped to an angle")]
    PolynomialToAngle(String),
}

/// An ordered list of coordinates with unique names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Patch {
    coords: Vec<Coordinate>,
}

impl Patch {
    pub fn new(coords: Vec<Coordinate>) -> Result<Self, ExprError> {
        let mut seen = HashSet::new();
        for c in &coords {
            if !is_identifier(&c.name) || c.name == "sin" || c.name == "cos" {
                return Err(ExprError::InvalidName(c.name.clone()));
            }
            if !seen.insert(c.name.as_str()) {
                return Err(ExprError::DuplicateCoordinate(c.name.clone()));
            }
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name == name)
    }

    pub fn coord(&self, idx: usize) -> &Coordinate {
        &self.coords[idx]
    }

    pub fn names(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.name.clone()).collect()
    }

    pub fn parse(&self, text: &str) -> Result<ScalarExpr, ParseError> {
        parse(text, self)
    }

    /// Fourier mean over the named angle coordinate.
    pub fn angle_average(&self, e: &ScalarExpr, angle: usize) -> Result<ScalarExpr, ExprError> {
        let c = &self.coords[angle];
        if !c.angle {
            return Err(ExprError::NotAngle(c.name.clone()));
        }
        Ok(e.average_over(angle))
    }

    pub fn render(&self, e: &ScalarExpr) -> String {
        e.render(&self.names())
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

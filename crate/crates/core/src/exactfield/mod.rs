//! Exact arithmetic: rationals, univariate polynomials, factorization over
//! the rationals and over a simple extension, and the extension field
//! `L = K[θ]/(f)` itself.

mod factor;
mod modp;
mod poly;
mod rational;
mod tower;
mod trager;
mod zpoly;

use std::fmt;

use thiserror::Error;

pub use factor::{poly_factor, squarefree_decomposition, Factorization};
pub use poly::{poly_gcd, poly_lcm, poly_xgcd, Poly};
pub use rational::Rational;
pub use tower::{ext_inv, ext_minpoly, ExtElem, FieldTower, BUILTIN_THETA7};
pub use trager::{factor_over_tower, is_irreducible_over};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("minimal polynomial must be monic of positive degree")]
    NotMonic,
    #[error("minimal polynomial {0} is reducible over the rationals")]
    Reducible(String),
    #[error("element has {got} coordinates, tower degree is {expected}")]
    BadLength { expected: usize, got: usize },
}

/// An element type usable as a polynomial or matrix coefficient.
pub trait FieldElem: Clone + PartialEq + Eq + Ord + fmt::Debug {
    fn is_zero(&self) -> bool;
}

impl FieldElem for Rational {
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

/// A field of characteristic zero, given as a finite-dimensional algebra over
/// the rationals. Operations live on the field value so that elements can be
/// plain data (a tower element does not carry its minimal polynomial).
pub trait Field {
    type Elem: FieldElem;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn from_rational(&self, q: &Rational) -> Self::Elem;

    /// Dimension over the rationals.
    fn k_dim(&self) -> usize;
    fn to_k_coords(&self, a: &Self::Elem) -> Vec<Rational>;
    fn from_k_coords(&self, coords: &[Rational]) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(&Rational::from_int(n))
    }

    /// The element as a rational, when it lies in the base field.
    fn as_rational(&self, a: &Self::Elem) -> Option<Rational> {
        let c = self.to_k_coords(a);
        if c[1..].iter().all(|x| x.is_zero()) {
            Some(c[0].clone())
        } else {
            None
        }
    }
}

/// The base field `K` of rational numbers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn inv(&self, a: &Rational) -> Result<Rational, FieldError> {
        a.inv()
    }
    fn from_rational(&self, q: &Rational) -> Rational {
        q.clone()
    }
    fn k_dim(&self) -> usize {
        1
    }
    fn to_k_coords(&self, a: &Rational) -> Vec<Rational> {
        vec![a.clone()]
    }
    fn from_k_coords(&self, coords: &[Rational]) -> Rational {
        coords[0].clone()
    }
    fn as_rational(&self, a: &Rational) -> Option<Rational> {
        Some(a.clone())
    }
}

//! Exact coefficient fields: Q(i), prime fields, and towers of quadratic
//! extensions over Q(i).
//!
//! All arithmetic is exact; zero-testing is decidable in every field. Generic
//! code is written against the [`Field`] trait, with the field itself carried
//! as a lightweight "structure" object so that parametrized fields (a prime
//! modulus, a tower of adjoined square roots) need no global state.

mod fp;
mod gauss;
mod tower;

pub use fp::{is_prime_u64 as fp_is_prime, FpField};
pub use gauss::{rat, rat_i, GaussField, GaussQ, Rat};
pub use tower::{TowerElem, TowerField, DEFAULT_TOWER_DEPTH_CAP};

use std::fmt::Debug;

/// Errors raised by field arithmetic.
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    Mismatch(String),
    #[error("extension overflow: tower depth cap {0} exceeded")]
    ExtensionOverflow(usize),
}

/// A field of exact scalars, presented as a structure object over an element
/// type. Implementations guarantee exact arithmetic and exact zero tests.
pub trait Field: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;

    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// A square root of -1 in this field, when one exists.
    fn imaginary_unit(&self) -> Option<Self::Elem> {
        None
    }

    /// In-place `a += c * b`, the row-operation kernel of elimination.
    fn add_mul_assign(&self, a: &mut Self::Elem, c: &Self::Elem, b: &Self::Elem) {
        *a = self.add(a, &self.mul(c, b));
    }

    /// Renders an element for reports; `Debug` is too noisy for rationals.
    fn display(&self, a: &Self::Elem) -> String;
}

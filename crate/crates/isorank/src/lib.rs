//! Exact computational algebra for isotropic decompositions of harmonic
//! polynomials.
//!
//! A homogeneous form is harmonic when a fixed non-degenerate quadratic
//! differential operator annihilates it; such forms are exactly the sums of
//! powers of *isotropic* linear forms, and the minimal number of powers
//! needed is the form's isotropic rank. This crate computes isotropic ranks
//! and explicit decompositions exactly — over Q(i) and towers of quadratic
//! extensions — for the classified families (binary and ternary forms,
//! quadratic forms via trace-zero matrices, monomials), bounds ranks through
//! catalecticants and a constructive doubling of Waring decompositions, and
//! verifies the dimensions of secant varieties of isotropic Veronese
//! varieties experimentally over large prime fields via Terracini tangent
//! spaces and the postulation of double points on quadrics.
//!
//! The `examples/` directory has one runnable example per capability; the
//! `isorank` binary exposes the same operations for batch use with JSON
//! input and output.

pub mod apolarity;
pub mod decompose;
pub mod field;
pub mod io;
pub mod matrix;
pub mod monomials;
pub mod poly;
pub mod quadrics;
pub mod secant;
pub mod ternary;

pub use field::{Field, FieldError, FpField, GaussField, GaussQ, TowerElem, TowerField};
pub use matrix::MatrixExact;
pub use poly::MultiPoly;

//! Symbolic rational homotopy theory over the rationals.
//!
//! The crate builds free graded-commutative algebras with exact rational
//! coefficients, validates differentials, computes truncated cohomology,
//! constructs minimal Sullivan models degree-by-degree or stage-by-stage,
//! extracts fundamental Lie algebras and lower central series, evaluates
//! holonomy actions on relative algebras, and manipulates polynomial
//! differential forms on standard simplices.
//!
//! Everything is exact: the only scalar type is an arbitrary-precision
//! rational, and all basis, representative, and solution choices follow
//! fixed deterministic conventions so repeated runs emit identical bytes.

pub mod apl;
pub mod budget;
pub mod cdga;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod graded;
pub mod holonomy;
pub mod lie;
pub mod linalg;
pub mod model;
pub mod target;

pub use error::{Error, Result};
pub use linalg::{QMatrix, Rational};

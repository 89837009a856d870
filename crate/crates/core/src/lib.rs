//! Separating invariants for finite matrix groups and parametric (additive
//! group, torus) actions.
//!
//! The crate computes homogeneous invariant slices by exact linear algebra,
//! certifies lower bounds for the separating degree with explicit witness
//! point pairs, builds separating morphisms from coset decompositions and
//! polarized elementary symmetric functions, and evaluates the relative
//! degree-bound calculus for finite groups.

pub mod bounds;
pub mod cases;
pub mod cli;
pub mod config;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod matrix;
pub mod polys;
pub mod reps;
pub mod scalars;
pub mod separation;
pub mod univariate;

pub use error::{Error, Result};
pub use scalars::{Elem, Field, FieldSpec, Scalar};

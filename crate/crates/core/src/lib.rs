//! Exact calculus of virtual idempotents.
//!
//! A virtual idempotent is a pair `⟨b, a⟩` of idempotent matrices whose
//! difference is finitely supported; it stands for the formal class
//! `[b] − [a]`. This crate implements the pair operations, the conjugator
//! constructions that witness algebraic homotopies between pairs, Fredholm
//! connectors with their index, and numeric tools for nearly idempotent
//! matrices.

pub mod analytic;
pub mod cli;
pub mod coeff;
pub mod error;
pub mod fred;
pub mod gen;
pub mod grass;
pub mod mat;
pub mod regular;
pub mod shape;
pub mod stab;
pub mod verify;

pub use coeff::{Rational, Ring, Scalar, TrigPoly};
pub use error::{Error, Result};
pub use mat::{ColumnFiniteOperator, StructuredMatrix};
pub use shape::{Index, IndexSet, Pos};

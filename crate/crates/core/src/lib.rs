//! Exact integer algebra for vertically-recurrent matrices.
//!
//! A vertically-recurrent matrix `V_n[Λ]` is lower triangular; each entry
//! below column 0 is a `Λ`-weighted sum down the previous column. This crate
//! builds such matrices and their Toeplitz and Pascal relatives, factors and
//! inverts them, detects the recurrence in arbitrary triangles, and ships
//! checkers for admissible matrices, ladder-network transfer polynomials and
//! minimal polynomials over prime fields.

pub mod acceptance;
pub mod admissible;
pub mod analysis;
pub mod error;
pub mod kernel;
pub mod lab;
pub mod ladder;
pub mod ltmatrix;
pub mod sequences;
pub mod vrm;

pub use error::{Error, Result};
pub use kernel::{Integer, Poly, Rational};
pub use ltmatrix::LtMatrix;
pub use sequences::Seq;
pub use vrm::{FirstColumn, VrmSpec};

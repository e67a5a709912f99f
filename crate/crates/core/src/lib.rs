//! Positive definite matrix completion and geometric means of partial
//! positive definite matrices.
//!
//! The crate is organised bottom-up: [`linalg`] provides symmetric matrices
//! and spectral functions, [`pattern`] handles specification graphs and
//! chordality, [`partial`] the partial matrices themselves, [`completion`]
//! feasibility intervals and maximum-determinant completions, and [`means`]
//! the weighted geometric mean and its relatives.

pub mod completion;
pub mod error;
pub mod format;
pub mod linalg;
pub mod means;
pub mod partial;
pub mod pattern;
pub mod sweep;

pub use error::{Error, Result};
pub use linalg::SymMatrix;
pub use partial::PartialMatrix;
pub use pattern::Pattern;

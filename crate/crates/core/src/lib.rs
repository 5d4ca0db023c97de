//! High-precision construction and verification of the E6(1) q-Painlevé Lax
//! pair arising from deformed big q-Jacobi orthogonal polynomials.

pub mod algebra;
pub mod cli;
pub mod correspondence;
pub mod ctx;
pub mod error;
pub mod ops;
pub mod painleve;
pub mod laxpair;
pub mod qcalculus;
pub mod sampling;
pub mod weight;

pub use ctx::Ctx;
pub use error::{Error, Result};

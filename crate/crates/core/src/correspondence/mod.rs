//! Dictionaries to Sakai's and Yamada's forms of the E6(1) Lax pair, with
//! the residual checks that confirm each identification numerically.

pub mod sakai;
pub mod yamada;

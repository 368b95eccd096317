//! Sums of Hermitian squares modulo cyclic equivalence for the polynomials
//! S_{m,k}(X², Y²) whose traces are the coefficients of tr((A + tB)^m).
//!
//! The crate builds explicit certificates for k = 4, checks them exactly in
//! rational arithmetic, spot-checks trace nonnegativity on random matrices
//! and searches for Gram-matrix certificates numerically.

pub mod certificate;
pub mod cyclic;
pub mod error;
pub mod gram;
pub mod ncpoly;
pub mod verifier;

pub use error::{Error, Result};
pub use ncpoly::{commutator, s_poly, Letter, Polynomial, Word};

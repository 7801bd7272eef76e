//! Boundary-unitary factorization of holomorphic functions on horizontal strips.
//!
//! The crate samples functions on horizontal lines of a periodic grid, continues
//! them between lines with Fourier multipliers, constructs the unimodular pair
//! `(w1, w2)` for an admissible `f`, and checks the associated operator
//! identities on finite matrices.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod factorizer;
pub mod json;
pub mod operator_lab;
pub mod special_fn;
pub mod strip_core;

pub use error::{Error, Result};
pub use num_complex::Complex64;

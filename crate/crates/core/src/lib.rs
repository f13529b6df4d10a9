//! Parameter-space computations for two-generator Kleinian groups: Möbius
//! maps and the (γ, β, β′) trace parameters, good-word trace polynomials,
//! exclusion batteries, triangle-group geometry, arithmetic screening and
//! volume bounds.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod error;
pub mod exclusion;
pub mod moebius;
pub mod poly;
pub mod tables;
pub mod triangle;
pub mod volume;
pub mod words;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

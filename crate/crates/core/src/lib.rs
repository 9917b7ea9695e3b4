//! Factorization of bivariate polynomials over prime fields.
//!
//! The factorization runs in three stages: a Newton polygon analysis of the
//! input, an analytic factorization over `K((x))` driven by slope
//! valuations, and a linear algebra recombination of the analytic factors
//! into factors over `K[x, y]`.

pub mod aplarith;
pub mod cli;
pub mod error;
pub mod facto;
pub mod ffield;
pub mod polygon;
pub mod recomb;
pub mod slopecore;

pub use error::{Error, Result};
pub use ffield::{PrimeField, UniPoly};
pub use slopecore::{BiPoly, Rat, Slope, Val};

//! Computations around the distance between factorials and repunits: local
//! obstructions for `n! = Phi_p(b) + a`, shifted cyclotomic polynomials, exhaustive
//! small-range searches, and explicit checks on prime sums in progressions.

pub mod analytic;
pub mod arith;
pub mod equation;
pub mod error;
pub mod obstruction;
pub mod poly;
mod serde_dec;

pub use error::{Error, Result};

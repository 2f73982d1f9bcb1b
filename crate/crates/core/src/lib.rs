//! Higher-order monotonicity for pseudo-Boolean and finite-grid functions.
//!
//! * [`subset`]: tables on the subset lattice, difference operators and the
//!   fully k-monotone checker.
//! * [`multilinear`]: multilinear extensions, their derivatives and
//!   compositions with univariate maps.
//! * [`grid`]: functions on finite product grids, finite differences,
//!   n-monotone and fully k-monotone checks, distribution functions.
//! * [`partition`]: disjoint set-interval covers of the upper levels of the
//!   subset lattice.
//! * [`compound`]: compounding a table with grid functions, indicator
//!   certificates and counterexamples.
//! * [`json`] and [`cli`]: exchange formats and the command-line front end.
//!
//! Exact arithmetic uses [`Rational`]; `f64` is available where irrational
//! values appear, always with an explicit tolerance.

pub mod cli;
pub mod compound;
pub mod error;
pub mod grid;
pub mod json;
pub mod mode;
pub mod multilinear;
pub mod partition;
pub mod scalar;
pub mod selftest;
pub mod subset;

pub use error::{Error, Result};
pub use mode::{Mode, Verdict};
pub use scalar::{parse_rational, rat, ratio, Rational, Scalar};

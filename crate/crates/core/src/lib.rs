//! Exact analysis of discrete logarithms on cyclically reduced words in the
//! free group `F(A_1, ..., A_n)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`words`]: letters, free and cyclic reduction, the signed generator count
//!   `log_j`, exhaustive enumeration, transfer-matrix histograms and an exactly
//!   uniform sampler.
//! - [`ratfunc`]: polynomials and rational functions over arbitrary-precision
//!   rationals, Taylor coefficients and singular parts at rational poles.
//! - [`zeta`]: the character-twisted Ihara generating function of the
//!   one-vertex bouquet and its derivatives in the twist parameter.
//! - [`asymptotics`]: Pochhammer sums and partial-sum main terms.
//! - [`stats`]: moments and exact distributions of the normalized logarithm.
//! - [`acceptance`]: the end-to-end verification suite shared by the test
//!   target and the `verify` CLI command.

pub mod acceptance;
pub mod asymptotics;
mod error;
pub mod ratfunc;
pub mod stats;
pub mod words;
pub mod zeta;

pub use error::{Error, Result};
pub use ratfunc::{Polynomial, Rational, RationalFunction, SingularPart};
pub use words::{CyclicWord, Histogram, Letter, ReducedWord, Sign};
pub use zeta::{BouquetParams, GeneratingFunctions};

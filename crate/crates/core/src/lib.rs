//! Exact and statistical computations around magic squares, pseudomagic
//! squares and the moments they count.
//!
//! * [`counting`]: big-integer enumeration of nonnegative integer matrices
//!   with prescribed or bounded row and column sums.
//! * [`ehrhart`]: exact interpolation of the counting functions, Ehrhart
//!   reciprocity checks, h-vectors and polytope volumes.
//! * [`genfun`]: truncated multivariate power series used as an independent
//!   coefficient-extraction oracle for the counts.
//! * [`zeta`]: restricted divisor profiles and mean values of powers of
//!   partial sums of the Riemann zeta function.
//! * [`euler`]: truncated Euler products for the arithmetic factors.
//! * [`rmt`]: Haar-random unitary matrices, secular coefficients and Monte
//!   Carlo moment estimates.

pub mod counting;
pub mod ehrhart;
pub mod error;
pub mod euler;
pub mod genfun;
pub mod rmt;
pub mod zeta;

pub use error::{Error, Result};
pub use num_bigint::{BigInt, BigUint};
pub use num_complex::Complex64;
pub use num_rational::BigRational;

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

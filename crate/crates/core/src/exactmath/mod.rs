//! Exact arithmetic used by every verdict in the crate.
//!
//! Rationals are arbitrary precision. Vanishing of a sum of roots of unity
//! is decided by reducing the mask polynomial modulo the cyclotomic
//! polynomial of the ambient order, so no floating point enters an exact
//! answer. [`root_sum_value`] is the floating cross-check.

mod poly;
mod rational;
mod roots;

pub use poly::{cyclotomic_poly, IntPolynomial};
pub use rational::{format_rational, parse_rational, rational, rational_to_f64, Rational};
pub(crate) use rational::rem_rational;
pub use roots::{root_sum_is_zero, root_sum_value, ResidueMultiset};

//! Exact arithmetic: rationals, Laurent polynomials in `q`, multivariate Laurent
//! polynomials in `x_1..x_n` over `Z[q, 1/q]`, and rational functions in `q, z_1..z_n`
//! with factored denominators.

mod laurent;
mod parse;
mod qpoly;
mod rational_qz;
mod zqpoly;

pub use laurent::LaurentPoly;
pub use qpoly::{QPolynomial, equal_as_rational};
pub use rational_qz::{Atom, RationalQZ};
pub use zqpoly::{ZqMonomial, ZqPolynomial};

/// Exact rational number with arbitrary-precision numerator and positive denominator.
pub type Rational = num_rational::BigRational;

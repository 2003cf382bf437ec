//! Exact scalar and polynomial arithmetic over the Gaussian rationals ℚ(i).

mod combinatorics;
mod gaussian;
mod parse;
mod poly;
mod rational;

pub use combinatorics::{binomial, factorial, falling_factorial};
pub use gaussian::{gaussian_arith, ArithOp, GaussianRational};
pub use parse::{parse_rational, parse_scalar};
pub use poly::UniPolynomial;
pub use rational::Rational;

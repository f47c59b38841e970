//! Exact arithmetic: arbitrary-precision rationals and cyclotomic numbers.

mod cyclotomic;
mod matrix;
pub mod poly;

pub use matrix::Matrix;
pub use cyclotomic::{parse_rational, sqrt_of_integer, sqrt_of_rational, Cyclotomic};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("order {to} is not a multiple of order {from}")]
    NotAMultiple { from: u32, to: u32 },
    #[error("value of order {order} does not lie in the subfield of order {target}")]
    NotInSubfield { order: u32, target: u32 },
    #[error("cannot parse cyclotomic number from {0:?}")]
    Parse(String),
}

/// ζ_order^power.
pub fn make_root(order: u32, power: i64) -> Cyclotomic {
    Cyclotomic::root(order, power)
}

/// Shorthand for a rational literal `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

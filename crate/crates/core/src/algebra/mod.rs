//! Exact arithmetic: arbitrary-precision rationals, sparse univariate
//! polynomials, and fractions of polynomials with a unit denominator.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything here can be freely shared between threads.

mod fraction;
mod poly;

pub use fraction::SeriesFraction;
pub use poly::Polynomial;

pub(crate) use poly::poly_string;

/// Coefficient field: exact rationals. Always stored reduced, with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Identifies the branch variable a polynomial lives in (0-based branch index).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(pub usize);

/// Order of vanishing of a series: the lowest exponent with a nonzero
/// coefficient, or `Infinite` for the zero series.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Infinite => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Order::Finite(0)
    }
}

impl std::ops::Add for Order {
    type Output = Order;

    fn add(self, rhs: Order) -> Order {
        match (self, rhs) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        }
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

pub(crate) fn rational_int(n: i64) -> Rational {
    Rational::from_integer(num_bigint::BigInt::from(n))
}

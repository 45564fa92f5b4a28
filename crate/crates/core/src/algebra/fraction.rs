//! Quotients of polynomials with a unit denominator.
//!
//! Blow-ups divide parametrization coordinates by minimal-valuation elements;
//! keeping the results as fractions keeps the whole pipeline exact, with no
//! series expansion until output time.

use num_traits::Zero;

use super::poly::Polynomial;
use super::{Order, Rational, Var};
use crate::error::{Error, Result};

/// Degree above which a freshly built fraction is run through a full
/// polynomial-gcd reduction. Common powers of the variable are always
/// cancelled; unreduced fractions below the threshold are still correct.
const GCD_REDUCE_THRESHOLD: u64 = 256;

/// An element of K[[t]] stored as `num/den` with `ord(den) = 0`.
///
/// Invariants: the denominator is a unit (nonzero constant term), the
/// numerator and denominator share no common factor `t^m` with `m > 0`, and
/// the zero element is stored canonically as `0/1`.
#[derive(Clone, Debug)]
pub struct SeriesFraction {
    num: Polynomial,
    den: Polynomial,
}

impl SeriesFraction {
    /// Builds a fraction, cancelling any common power of the variable first.
    /// Fails with `NotASeries` when the denominator still has positive order
    /// afterwards, and with `DivisionByZero` when the denominator is zero.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        assert_eq!(num.var(), den.var(), "numerator and denominator in different variables");
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(SeriesFraction::zero(num.var()));
        }
        let m = match (num.order(), den.order()) {
            (Order::Finite(a), Order::Finite(b)) => a.min(b),
            _ => unreachable!("both sides nonzero"),
        };
        let num = num.shift_down(m);
        let den = den.shift_down(m);
        if !den.order().is_zero() {
            return Err(Error::NotASeries);
        }
        Ok(SeriesFraction { num, den }.maybe_reduced())
    }

    pub fn from_poly(num: Polynomial) -> Self {
        let var = num.var();
        SeriesFraction { num, den: Polynomial::one(var) }
    }

    pub fn zero(var: Var) -> Self {
        SeriesFraction::from_poly(Polynomial::zero(var))
    }

    pub fn one(var: Var) -> Self {
        SeriesFraction::from_poly(Polynomial::one(var))
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        SeriesFraction::from_poly(Polynomial::constant(var, c))
    }

    pub fn var(&self) -> Var {
        self.num.var()
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// ord(num) - ord(den) = ord(num), since the denominator is a unit.
    pub fn order(&self) -> Order {
        self.num.order()
    }

    pub fn constant_term(&self) -> Rational {
        self.num.constant_term() / self.den.constant_term()
    }

    /// Coefficient of the lowest-order term of the series expansion.
    pub fn lowest_coeff(&self) -> Option<Rational> {
        self.num.lowest_term().map(|(_, c)| c / self.den.constant_term())
    }

    pub fn add(&self, rhs: &SeriesFraction) -> SeriesFraction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        if num.is_zero() {
            return SeriesFraction::zero(self.var());
        }
        SeriesFraction { num, den: &self.den * &rhs.den }.maybe_reduced()
    }

    pub fn sub(&self, rhs: &SeriesFraction) -> SeriesFraction {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> SeriesFraction {
        SeriesFraction { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &SeriesFraction) -> SeriesFraction {
        let num = &self.num * &rhs.num;
        if num.is_zero() {
            return SeriesFraction::zero(self.var());
        }
        SeriesFraction { num, den: &self.den * &rhs.den }.maybe_reduced()
    }

    /// Exact division in K(t); the result must stay in K[[t]], i.e. keep a
    /// nonnegative order, otherwise `DivisionNotRepresentable`.
    pub fn div(&self, rhs: &SeriesFraction) -> Result<SeriesFraction> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match SeriesFraction::new(&self.num * &rhs.den, &self.den * &rhs.num) {
            Ok(f) => Ok(f),
            Err(Error::NotASeries) => Err(Error::DivisionNotRepresentable),
            Err(e) => Err(e),
        }
    }

    pub fn pow(&self, k: u64) -> SeriesFraction {
        SeriesFraction { num: self.num.pow(k), den: self.den.pow(k) }.maybe_reduced()
    }

    pub fn scaled(&self, c: &Rational) -> SeriesFraction {
        if c.is_zero() {
            return SeriesFraction::zero(self.var());
        }
        SeriesFraction { num: self.num.scaled(c), den: self.den.clone() }
    }

    /// f - gamma, used when normalizing away shared constant terms.
    pub fn sub_rational(&self, gamma: &Rational) -> SeriesFraction {
        let num = &self.num - &self.den.scaled(gamma);
        if num.is_zero() {
            return SeriesFraction::zero(self.var());
        }
        SeriesFraction { num, den: self.den.clone() }
    }

    /// The unique polynomial agreeing with the series expansion of `self` on
    /// all exponents below `cap`, computed by inverting the unit denominator
    /// with the geometric-series recurrence.
    pub fn expand_to_cap(&self, cap: u64) -> Polynomial {
        let var = self.var();
        if cap == 0 || self.num.is_zero() {
            return Polynomial::zero(var);
        }
        let cap_us = cap as usize;
        // inv[k] are the expansion coefficients of 1/den.
        let d0 = self.den.constant_term();
        let mut inv: Vec<Rational> = Vec::with_capacity(cap_us);
        inv.push(d0.recip());
        for k in 1..cap_us {
            let mut acc = Rational::zero();
            for (e, c) in self.den.terms() {
                if e == 0 || e > k as u64 {
                    continue;
                }
                acc += c * &inv[k - e as usize];
            }
            inv.push(-acc / &d0);
        }
        let mut terms: Vec<(u64, Rational)> = Vec::new();
        for (e, c) in self.num.terms() {
            if e >= cap {
                break;
            }
            for (k, b) in inv.iter().enumerate() {
                let exp = e + k as u64;
                if exp >= cap {
                    break;
                }
                terms.push((exp, c * b));
            }
        }
        Polynomial::from_terms(var, terms)
    }

    /// Full polynomial-gcd reduction of the fraction.
    pub fn reduced(&self) -> SeriesFraction {
        if self.num.is_zero() {
            return self.clone();
        }
        let g = self.num.gcd(&self.den);
        if g.degree() == Some(0) || g.is_zero() {
            return self.clone();
        }
        let num = self.num.div_exact(&g).expect("gcd divides numerator");
        let den = self.den.div_exact(&g).expect("gcd divides denominator");
        SeriesFraction { num, den }
    }

    fn maybe_reduced(self) -> SeriesFraction {
        let deg = self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0));
        if deg > GCD_REDUCE_THRESHOLD {
            self.reduced()
        } else {
            self
        }
    }
}

/// Fractions compare as series: a/b == c/d iff ad == cb.
impl PartialEq for SeriesFraction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for SeriesFraction {}

impl std::fmt::Display for SeriesFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let var = format!("t{}", self.var().0);
        if self.den.is_zero() || self.den == Polynomial::one(self.var()) {
            write!(f, "{}", super::poly::poly_string(&self.num, &var))
        } else {
            write!(
                f,
                "({})/({})",
                super::poly::poly_string(&self.num, &var),
                super::poly::poly_string(&self.den, &var)
            )
        }
    }
}

//! Sparse univariate polynomials over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{Order, Rational, Var};

/// A sparse polynomial in one branch variable.
///
/// Invariants: no stored coefficient is zero and exponents are distinct
/// (enforced by every constructor).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    var: Var,
    terms: BTreeMap<u64, Rational>,
}

impl Polynomial {
    pub fn zero(var: Var) -> Self {
        Polynomial { var, terms: BTreeMap::new() }
    }

    pub fn one(var: Var) -> Self {
        Polynomial::constant(var, Rational::one())
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        Polynomial::monomial(var, 0, c)
    }

    pub fn monomial(var: Var, exp: u64, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Polynomial { var, terms }
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, combining like
    /// terms and eliding zero coefficients.
    pub fn from_terms(var: Var, it: impl IntoIterator<Item = (u64, Rational)>) -> Self {
        let mut terms: BTreeMap<u64, Rational> = BTreeMap::new();
        for (exp, c) in it {
            let entry = terms.entry(exp).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(&exp);
            }
        }
        Polynomial { var, terms }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: u64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    /// Lowest exponent with a nonzero coefficient; `Infinite` for zero.
    pub fn order(&self) -> Order {
        match self.terms.keys().next() {
            Some(&e) => Order::Finite(e),
            None => Order::Infinite,
        }
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    /// Term of lowest order (the series-leading term).
    pub fn lowest_term(&self) -> Option<(u64, &Rational)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Polynomial::zero(self.var);
        }
        let terms = self.terms.iter().map(|(e, v)| (*e, v * c)).collect();
        Polynomial { var: self.var, terms }
    }

    /// Divides by `t^m`; requires every exponent to be at least `m`.
    pub fn shift_down(&self, m: u64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                debug_assert!(*e >= m);
                (*e - m, c.clone())
            })
            .collect();
        Polynomial { var: self.var, terms }
    }

    pub fn shift_up(&self, m: u64) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (*e + m, c.clone())).collect();
        Polynomial { var: self.var, terms }
    }

    /// Keeps only the terms of exponent strictly below `cap`.
    pub fn truncate_below(&self, cap: u64) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| **e < cap)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        Polynomial { var: self.var, terms }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Polynomial::one(self.var);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact division; returns `None` when the remainder is nonzero.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Euclidean division by the top-degree term of `d`.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        assert_eq!(self.var, d.var, "polynomials in different variables");
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let dl = d.terms[&dd].clone();
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.var);
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.terms[&rd].clone() / dl.clone();
            let q = Polynomial::monomial(self.var, rd - dd, c);
            rem = &rem - &(&q * d);
            quot = &quot + &q;
        }
        (quot, rem)
    }

    /// Monic gcd of two polynomials over the rationals, computed through a
    /// primitive pseudo-remainder sequence over the integers to keep the
    /// coefficients from exploding.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.var, other.var, "polynomials in different variables");
        if self.is_zero() {
            return other.clone().into_monic();
        }
        if other.is_zero() {
            return self.clone().into_monic();
        }
        let mut a = int_primitive(self);
        let mut b = int_primitive(other);
        if int_deg(&a) < int_deg(&b) {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = int_primitive_part(pseudo_rem(&a, &b));
            a = b;
            b = r;
        }
        let poly = Polynomial::from_terms(
            self.var,
            a.into_iter().map(|(e, c)| (e, Rational::from_integer(c))),
        );
        poly.into_monic()
    }

    fn into_monic(self) -> Polynomial {
        match self.degree() {
            None => self,
            Some(d) => {
                let lead = self.terms[&d].clone();
                if lead.is_one() {
                    self
                } else {
                    self.scaled(&lead.recip())
                }
            }
        }
    }
}

type IntPoly = BTreeMap<u64, num_bigint::BigInt>;

fn big_gcd(mut a: num_bigint::BigInt, mut b: num_bigint::BigInt) -> num_bigint::BigInt {
    use num_traits::sign::Signed as _;
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a.abs()
}

/// Clears denominators and divides out the content.
fn int_primitive(p: &Polynomial) -> IntPoly {
    let mut lcm = num_bigint::BigInt::from(1);
    for (_, c) in p.terms() {
        let d = c.denom();
        let g = big_gcd(lcm.clone(), d.clone());
        lcm = lcm / g * d;
    }
    let ints: IntPoly = p
        .terms()
        .map(|(e, c)| (e, c.numer() * (&lcm / c.denom())))
        .collect();
    int_primitive_part(ints)
}

fn int_primitive_part(p: IntPoly) -> IntPoly {
    let mut content = num_bigint::BigInt::from(0);
    for c in p.values() {
        content = big_gcd(content, c.clone());
    }
    if content.is_zero() || content == num_bigint::BigInt::from(1) {
        return p;
    }
    p.into_iter().map(|(e, c)| (e, c / &content)).collect()
}

fn int_deg(p: &IntPoly) -> u64 {
    p.keys().next_back().copied().unwrap_or(0)
}

/// Pseudo-remainder of a by b (deg a >= deg b): repeatedly scale by the
/// leading coefficient of b and cancel the top term, dividing out the
/// content after every step so the coefficients stay small. Scalar factors
/// are irrelevant because the caller takes primitive parts.
fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = int_deg(b);
    let lb = b[&db].clone();
    let mut r = a.clone();
    while !r.is_empty() && int_deg(&r) >= db {
        let dr = int_deg(&r);
        let lr = r[&dr].clone();
        let mut next: IntPoly = BTreeMap::new();
        for (e, c) in &r {
            if *e == dr {
                continue;
            }
            let v = c * &lb;
            if !v.is_zero() {
                next.insert(*e, v);
            }
        }
        for (e, c) in b {
            if *e == db {
                continue;
            }
            let shifted = e + dr - db;
            let v = next.remove(&shifted).unwrap_or_default() - c * &lr;
            if !v.is_zero() {
                next.insert(shifted, v);
            }
        }
        r = int_primitive_part(next);
    }
    r
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(e, c)| (*e, -c)).collect();
        Polynomial { var: self.var, terms }
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.var, rhs.var, "polynomials in different variables");
        Polynomial::from_terms(
            self.var,
            self.terms
                .iter()
                .map(|(e, c)| (*e, c.clone()))
                .chain(rhs.terms.iter().map(|(e, c)| (*e, c.clone()))),
        )
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.var, rhs.var, "polynomials in different variables");
        let mut terms: BTreeMap<u64, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea + eb;
                let entry = terms.entry(e).or_insert_with(Rational::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    terms.remove(&e);
                }
            }
        }
        Polynomial { var: self.var, terms }
    }
}

/// Canonical form in the input grammar with the given variable symbol:
/// ascending exponents, `-` folded into separators, coefficient 1 elided.
pub(crate) fn poly_string(p: &Polynomial, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (exp, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let abs = c.abs();
        let atom = match exp {
            0 => None,
            1 => Some(var.to_string()),
            _ => Some(format!("{var}^{exp}")),
        };
        match atom {
            None => out.push_str(&rational_string(&abs)),
            Some(a) => {
                if abs.is_one() {
                    out.push_str(&a);
                } else {
                    out.push_str(&rational_string(&abs));
                    out.push('*');
                    out.push_str(&a);
                }
            }
        }
    }
    out
}

fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

//! Sparse multivariate polynomials with integer coefficients.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], ordered graded
//! lexicographically (total degree first, then `X1 > X2 > ...`). The map never
//! stores a zero coefficient, so two polynomials are equal exactly when their
//! term maps are identical. Every polynomial carries its variable count;
//! combining polynomials of different arity is an error, never a promotion.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::arith::{ArithError, Integer, Rational};
use crate::scalar::{RingKind, Scalar, ScalarRing};

/// Exponent vector `[e1, ..., em]` standing for `X1^e1 * ... * Xm^em`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(vars: usize) -> Self {
        Monomial(vec![0; vars])
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, divisor: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The ring `Z[X1, ..., Xm]` for a fixed `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyRing {
    pub vars: usize,
}

impl PolyRing {
    pub fn new(vars: usize) -> Self {
        PolyRing { vars }
    }

    /// The indeterminate `X_index`, 1-based.
    pub fn var(&self, index: usize) -> Result<MultiPoly, ArithError> {
        MultiPoly::var(index, self.vars)
    }

    pub fn vars(&self) -> Vec<MultiPoly> {
        (1..=self.vars).map(|i| self.var(i).expect("in range")).collect()
    }
}

impl ScalarRing for PolyRing {
    type Elem = MultiPoly;
    const KIND: RingKind = RingKind::Poly;

    fn zero(&self) -> MultiPoly {
        MultiPoly::zero(self.vars)
    }
    fn one(&self) -> MultiPoly {
        MultiPoly::constant(Integer::one(), self.vars)
    }
    fn integer(&self, n: &Integer) -> MultiPoly {
        MultiPoly::constant(n.clone(), self.vars)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: usize,
    terms: BTreeMap<Monomial, Integer>,
}

impl MultiPoly {
    pub fn zero(vars: usize) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Integer, vars: usize) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars), c);
        }
        p
    }

    /// The indeterminate `X_index` in `vars` variables; `index` is 1-based.
    pub fn var(index: usize, vars: usize) -> Result<Self, ArithError> {
        if index == 0 || index > vars {
            return Err(ArithError::VariableIndex { index, count: vars });
        }
        let mut exps = vec![0; vars];
        exps[index - 1] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(Monomial(exps), Integer::one());
        Ok(p)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, combining
    /// repeated monomials and dropping zeros.
    pub fn from_terms(
        vars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Integer)>,
    ) -> Result<Self, ArithError> {
        let mut p = Self::zero(vars);
        for (exps, c) in terms {
            if exps.len() != vars {
                return Err(ArithError::ArityMismatch {
                    left: vars,
                    right: exps.len(),
                });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    pub fn variable_count(&self) -> usize {
        self.vars
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Integer)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Integer)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// `(exponents, coefficient)` pairs in descending graded-lex order.
    pub fn to_terms(&self) -> Vec<(Vec<u32>, Integer)> {
        self.terms().map(|(m, c)| (m.0.clone(), c.clone())).collect()
    }

    fn add_term(&mut self, m: Monomial, c: Integer) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &Self) -> Result<(), ArithError> {
        if self.vars != other.vars {
            return Err(ArithError::ArityMismatch {
                left: self.vars,
                right: other.vars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Integer) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        MultiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Exact quotient `self / divisor` in `Z[X1..Xm]`.
    ///
    /// Repeatedly cancels the leading term of the running remainder against
    /// the divisor's leading term. Any step where that is impossible (monomial
    /// or coefficient does not divide) means the division is not exact.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, ArithError> {
        self.check_arity(divisor)?;
        let (lead_m, lead_c) = divisor.leading_term().ok_or(ArithError::DivisionByZero)?;
        let inexact = || ArithError::Inexact {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };
        let mut rem = self.terms.clone();
        let mut quotient = Self::zero(self.vars);
        while let Some((m, c)) = rem.iter().next_back() {
            if !lead_m.divides(m) {
                return Err(inexact());
            }
            let (qc, r) = c.div_rem(lead_c);
            if !r.is_zero() {
                return Err(inexact());
            }
            let qm = m.div(lead_m);
            for (dm, dc) in &divisor.terms {
                let key = dm.mul(&qm);
                let delta = -(dc * &qc);
                match rem.entry(key) {
                    Entry::Vacant(v) => {
                        v.insert(delta);
                    }
                    Entry::Occupied(mut o) => {
                        *o.get_mut() += delta;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            quotient.terms.insert(qm, qc);
        }
        Ok(quotient)
    }

    /// Substitutes `X_i := point[i - 1]`.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, ArithError> {
        if point.len() != self.vars {
            return Err(ArithError::PointLength {
                expected: self.vars,
                got: point.len(),
            });
        }
        let mut powers: Vec<Vec<Rational>> = point.iter().map(|x| vec![Rational::one(), x.clone()]).collect();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = Rational::from_integer(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                let table = &mut powers[i];
                while table.len() <= e {
                    let next = &table[table.len() - 1] * &point[i];
                    table.push(next);
                }
                term *= &table[e];
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn pow(&self, exp: u32) -> Self {
        Scalar::pow(self, exp)
    }
}

impl fmt::Display for MultiPoly {
    /// Renders as `3*X1^2*X2 - 1`, leading term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("X{}", i + 1)
                    } else {
                        format!("X{}^{}", i + 1, e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn arity_panic(e: ArithError) -> ! {
    panic!("polynomial arithmetic: {e}")
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &'a MultiPoly) -> MultiPoly {
                self.$checked(rhs).unwrap_or_else(|e| arity_panic(e))
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &'a MultiPoly) -> MultiPoly {
                self.$checked(rhs).unwrap_or_else(|e| arity_panic(e))
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$checked(&rhs).unwrap_or_else(|e| arity_panic(e))
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(mut self) -> MultiPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -self.clone()
    }
}

impl Scalar for MultiPoly {
    type Ring = PolyRing;

    fn ring(&self) -> PolyRing {
        PolyRing::new(self.vars)
    }
    fn is_zero_elem(&self) -> bool {
        self.terms.is_empty()
    }
    fn is_one_elem(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.degree() == 0 && c.is_one())
    }
    fn exact_div(&self, divisor: &Self) -> Result<Self, ArithError> {
        MultiPoly::exact_div(self, divisor)
    }
}

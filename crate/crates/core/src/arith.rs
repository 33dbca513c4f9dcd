//! Arbitrary-precision integers and rationals, and exact binomial coefficients.
//!
//! [`Integer`] and [`Rational`] are the `num` big-number types. Both are kept in
//! canonical form by construction: zero has no sign and an empty magnitude, and a
//! rational is always reduced with a positive denominator. The helpers here add
//! the operations the rest of the crate needs on top of that: exact division that
//! refuses to truncate, decimal and `p/q` text forms, and binomial coefficients.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision signed integer.
pub type Integer = BigInt;

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division: {dividend} is not divisible by {divisor}")]
    Inexact { dividend: String, divisor: String },
    #[error("binomial coefficient requires n >= 0, got n = {0}")]
    NegativeBinomialTop(Integer),
    #[error("variable count mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for {count} variables")]
    VariableIndex { index: usize, count: usize },
    #[error("evaluation point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("cannot parse {input:?} as {what}")]
    Parse { input: String, what: &'static str },
}

/// Integer division that fails unless `divisor` divides `dividend` exactly.
pub fn exact_div(dividend: &Integer, divisor: &Integer) -> Result<Integer, ArithError> {
    if divisor.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    let (q, r) = dividend.div_rem(divisor);
    if !r.is_zero() {
        return Err(ArithError::Inexact {
            dividend: dividend.to_string(),
            divisor: divisor.to_string(),
        });
    }
    Ok(q)
}

/// Rational division; fails only on a zero divisor.
pub fn exact_div_rational(dividend: &Rational, divisor: &Rational) -> Result<Rational, ArithError> {
    if divisor.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    Ok(dividend / divisor)
}

/// Non-negative greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &Integer, b: &Integer) -> Integer {
    a.gcd(b)
}

/// Binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n`.
///
/// Uses the multiplicative formula with a running exact division, so the
/// intermediate never exceeds `C(n, k) * k`.
pub fn binomial(n: &Integer, k: &Integer) -> Result<Integer, ArithError> {
    if n.is_negative() {
        return Err(ArithError::NegativeBinomialTop(n.clone()));
    }
    if k.is_negative() || k > n {
        return Ok(Integer::zero());
    }
    let complement = n - k;
    let k = if &complement < k { complement } else { k.clone() };
    let mut acc = Integer::one();
    let mut i = Integer::one();
    let base = n - &k;
    while i <= k {
        acc = exact_div(&(acc * (&base + &i)), &i)?;
        i += 1;
    }
    Ok(acc)
}

/// `C(n, k)` for machine-sized arguments; `k > n` gives zero.
pub fn binomial_u64(n: u64, k: u64) -> Integer {
    binomial(&Integer::from(n), &Integer::from(k)).expect("non-negative n")
}

/// `C(n, k)` where `k` may be negative (then zero), as appears in shifted
/// entry formulas like `C(n + j - 2, k - 2)`.
pub fn binomial_signed(n: u64, k: i64) -> Integer {
    binomial(&Integer::from(n), &Integer::from(k)).expect("non-negative n")
}

pub fn parse_integer(s: &str) -> Result<Integer, ArithError> {
    Integer::from_str(s.trim()).map_err(|_| ArithError::Parse {
        input: s.to_string(),
        what: "integer",
    })
}

/// Parses `"p/q"` or a bare integer `"p"`. The result is reduced; a zero
/// denominator is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let err = || ArithError::Parse {
        input: s.to_string(),
        what: "rational",
    };
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = Integer::from_str(p.trim()).map_err(|_| err())?;
            let q = Integer::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(ArithError::DivisionByZero);
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(Integer::from_str(s).map_err(|_| err())?)),
    }
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(Integer::from(p), Integer::from(q))
}

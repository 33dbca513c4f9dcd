//! The exact ground rings every matrix is generic over.
//!
//! A [`Scalar`] is an element of an exact commutative ring with a (partial)
//! exact division. Constants such as zero and one come from the element's
//! [`ScalarRing`] context rather than from a static constructor, because a
//! polynomial's zero still carries its variable count.

use std::fmt::{Debug, Display};
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer as _;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{exact_div, exact_div_rational, ArithError, Integer, Rational};
use crate::matrix::{Matrix, MatrixError};
use crate::multipoly::MultiPoly;

/// Tag used in serialized matrices: `"int"`, `"rat"` or `"poly"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    Int,
    Rat,
    Poly,
}

impl RingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RingKind::Int => "int",
            RingKind::Rat => "rat",
            RingKind::Poly => "poly",
        }
    }
}

/// Ring context: knows how to make constants of its element type.
pub trait ScalarRing: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Scalar<Ring = Self>;

    const KIND: RingKind;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn integer(&self, n: &Integer) -> Self::Elem;

    fn int(&self, n: i64) -> Self::Elem {
        self.integer(&Integer::from(n))
    }
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Hash
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    type Ring: ScalarRing<Elem = Self>;

    fn ring(&self) -> Self::Ring;

    fn is_zero_elem(&self) -> bool;

    fn is_one_elem(&self) -> bool;

    /// Quotient `q` with `q * divisor == self`, or an error when none exists.
    fn exact_div(&self, divisor: &Self) -> Result<Self, ArithError>;

    /// Feeds a canonical form of the value to `state`.
    fn digest_into<H: Hasher>(&self, state: &mut H) {
        self.hash(state);
    }

    /// Determinant by fraction-free elimination. Fields override this to
    /// eliminate over a cleared integer matrix instead.
    fn det_fraction_free(m: &Matrix<Self>) -> Result<Self, MatrixError> {
        m.bareiss_in_ring()
    }

    fn pow(&self, exp: u32) -> Self {
        let mut result = self.ring().one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        result
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegerRing;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RationalField;

impl ScalarRing for IntegerRing {
    type Elem = Integer;
    const KIND: RingKind = RingKind::Int;

    fn zero(&self) -> Integer {
        Integer::zero()
    }
    fn one(&self) -> Integer {
        Integer::one()
    }
    fn integer(&self, n: &Integer) -> Integer {
        n.clone()
    }
}

impl ScalarRing for RationalField {
    type Elem = Rational;
    const KIND: RingKind = RingKind::Rat;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn integer(&self, n: &Integer) -> Rational {
        Rational::from_integer(n.clone())
    }
}

impl Scalar for Integer {
    type Ring = IntegerRing;

    fn ring(&self) -> IntegerRing {
        IntegerRing
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one_elem(&self) -> bool {
        One::is_one(self)
    }
    fn exact_div(&self, divisor: &Self) -> Result<Self, ArithError> {
        exact_div(self, divisor)
    }
}

impl Scalar for Rational {
    type Ring = RationalField;

    fn ring(&self) -> RationalField {
        RationalField
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one_elem(&self) -> bool {
        One::is_one(self)
    }
    fn exact_div(&self, divisor: &Self) -> Result<Self, ArithError> {
        exact_div_rational(self, divisor)
    }

    // the derived Hash on ratios walks a continued fraction; the stored
    // form is already reduced, so hashing its parts is canonical
    fn digest_into<H: Hasher>(&self, state: &mut H) {
        self.numer().hash(state);
        self.denom().hash(state);
    }

    /// Scales row `i` by the lcm `d_i` of its denominators, eliminates over
    /// the integers and divides by `prod d_i`.
    fn det_fraction_free(m: &Matrix<Self>) -> Result<Self, MatrixError> {
        let (rows, cols) = m.shape();
        let lcms: Vec<Integer> = (0..rows)
            .map(|i| m.row(i).iter().fold(Integer::one(), |acc, x| acc.lcm(x.denom())))
            .collect();
        let cleared = Matrix::from_fn(IntegerRing, rows, cols, |i, j| {
            let x = m.get(i, j);
            x.numer() * (&lcms[i] / x.denom())
        });
        let det = cleared.bareiss_in_ring()?;
        Ok(Rational::new(det, lcms.into_iter().product()))
    }
}

/// Product of an iterator of scalars, starting from the ring's one.
pub fn product<R: Scalar>(ring: &R::Ring, items: impl IntoIterator<Item = R>) -> R {
    items.into_iter().fold(ring.one(), |acc, x| acc * &x)
}

/// A ring element from whichever ground ring a computation ended up in.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyScalar {
    Int(Integer),
    Rat(Rational),
    Poly(MultiPoly),
}

impl AnyScalar {
    pub fn kind(&self) -> RingKind {
        match self {
            AnyScalar::Int(_) => RingKind::Int,
            AnyScalar::Rat(_) => RingKind::Rat,
            AnyScalar::Poly(_) => RingKind::Poly,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            AnyScalar::Int(v) => v.is_zero_elem(),
            AnyScalar::Rat(v) => v.is_zero_elem(),
            AnyScalar::Poly(v) => v.is_zero_elem(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            AnyScalar::Int(v) => v.is_one_elem(),
            AnyScalar::Rat(v) => v.is_one_elem(),
            AnyScalar::Poly(v) => v.is_one_elem(),
        }
    }
}

impl Display for AnyScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnyScalar::Int(v) => write!(f, "{v}"),
            AnyScalar::Rat(v) => write!(f, "{v}"),
            AnyScalar::Poly(v) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    #[test]
    fn pow_by_squaring() {
        let two = Integer::from(2);
        assert_eq!(Scalar::pow(&two, 0), Integer::from(1));
        assert_eq!(Scalar::pow(&two, 10), Integer::from(1024));
        assert_eq!(Scalar::pow(&rational(-1, 2), 3), rational(-1, 8));
    }

    #[test]
    fn product_of_empty_is_one() {
        assert_eq!(product::<Integer>(&IntegerRing, []), Integer::from(1));
        assert_eq!(
            product(&RationalField, [rational(2, 3), rational(3, 4)]),
            rational(1, 2)
        );
    }
}

//! Exact construction and verification of structured Vandermonde-type
//! determinants.
//!
//! The crate builds four matrix families (power-derivative, its shifted
//! variant, binomial-power block matrices and Pascal-type binomial matrices),
//! evaluates their determinants from closed-form products, and replays the
//! inductive reductions that prove those products as certificate-producing
//! algorithms. Everything is exact: determinants are computed over big
//! integers, big rationals or integer polynomials, and each identity can be
//! checked against two independent determinant oracles.
//!
//! Linear algebra is generic over [`Scalar`]; the aliases below name the
//! concrete instantiations used throughout.

pub mod arith;
pub mod families;
pub mod matrix;
pub mod multipoly;
pub mod random;
pub mod reduction;
pub mod scalar;

pub use arith::{binomial, ArithError, Integer, Rational};
pub use families::{Assignment, ClosedForm, FamilyError, FamilyKind, FamilySpec, VerificationReport};
pub use matrix::{AnyMatrix, ElementaryOp, Matrix, MatrixError, Multiplier};
pub use multipoly::{Monomial, MultiPoly, PolyRing};
pub use reduction::{run_engine, AnyReduction, Engine, FactorCertificate, Reduction, ReductionError, ReductionTrace, TraceOptions};
pub use scalar::{AnyScalar, IntegerRing, RationalField, RingKind, Scalar, ScalarRing};

pub type IntMatrix = Matrix<Integer>;
pub type RatMatrix = Matrix<Rational>;
pub type PolyMatrix = Matrix<MultiPoly>;

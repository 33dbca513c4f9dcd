//! The four structured matrix families and their closed-form determinants.
//!
//! | family | size | closed form |
//! |---|---|---|
//! | power-derivative | 2m | `(-1)^(m(m-1)/2) * prod X_i * prod_{i<j} (X_j - X_i)^4` |
//! | power-derivative-shifted | 2m | `(-1)^(m(m-1)/2) * prod X_i^4 * prod_{i<j} (X_j - X_i)^4` |
//! | binomial-power | ml | `prod X_i^(l(l-1)/2) * prod_{i<j} (X_j - X_i)^(l^2)` |
//! | binomial-pascal | m | `1` |
//!
//! Block rows are stacked top to bottom in variable order (`A_1` above `A_2`
//! and so on); the sign of the power-derivative identity depends on it.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{binomial_u64, format_rational, parse_rational, Integer, Rational};
use crate::matrix::{AnyMatrix, Matrix, MatrixError};
use crate::multipoly::PolyRing;
use crate::scalar::{AnyScalar, IntegerRing, RationalField, Scalar, ScalarRing};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("invalid {kind} parameters: {reason}")]
    InvalidParameter { kind: FamilyKind, reason: String },
    #[error("assignment has {got} values, expected {expected}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("{mode} size {size} exceeds the guard of {max}")]
    SizeGuard {
        mode: &'static str,
        size: usize,
        max: usize,
    },
    #[error("malformed family spec: {0}")]
    Format(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    PowerDerivative,
    PowerDerivativeShifted,
    BinomialPower,
    BinomialPascal,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::PowerDerivative,
        FamilyKind::PowerDerivativeShifted,
        FamilyKind::BinomialPower,
        FamilyKind::BinomialPascal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::PowerDerivative => "power-derivative",
            FamilyKind::PowerDerivativeShifted => "power-derivative-shifted",
            FamilyKind::BinomialPower => "binomial-power",
            FamilyKind::BinomialPascal => "binomial-pascal",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "power-derivative" | "pd" => Ok(FamilyKind::PowerDerivative),
            "power-derivative-shifted" | "shifted" => Ok(FamilyKind::PowerDerivativeShifted),
            "binomial-power" | "bp" => Ok(FamilyKind::BinomialPower),
            "binomial-pascal" | "pascal" => Ok(FamilyKind::BinomialPascal),
            other => Err(FamilyError::Format(format!("unknown family {other:?}"))),
        }
    }
}

/// Values substituted for `X_1..X_m`.
#[derive(Debug, Clone, PartialEq)]
pub enum Assignment {
    /// Keep the indeterminates; the matrix lives in `Z[X_1..X_m]`.
    Symbolic,
    /// Substitute rationals. Repeated or zero values are allowed.
    Numeric(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    /// Variable/block count; for the Pascal family, the matrix size.
    pub m: usize,
    pub n: Option<usize>,
    pub l: Option<usize>,
    pub assignment: Assignment,
}

impl FamilySpec {
    pub fn power_derivative(m: usize, assignment: Assignment) -> Self {
        FamilySpec {
            kind: FamilyKind::PowerDerivative,
            m,
            n: None,
            l: None,
            assignment,
        }
    }

    pub fn shifted(m: usize, assignment: Assignment) -> Self {
        FamilySpec {
            kind: FamilyKind::PowerDerivativeShifted,
            ..Self::power_derivative(m, assignment)
        }
    }

    pub fn binomial_power(m: usize, n: usize, l: usize, assignment: Assignment) -> Self {
        FamilySpec {
            kind: FamilyKind::BinomialPower,
            m,
            n: Some(n),
            l: Some(l),
            assignment,
        }
    }

    pub fn pascal(n: usize, m: usize) -> Self {
        FamilySpec {
            kind: FamilyKind::BinomialPascal,
            m,
            n: Some(n),
            l: None,
            assignment: Assignment::Symbolic,
        }
    }

    pub fn with_assignment(&self, assignment: Assignment) -> Self {
        FamilySpec {
            assignment,
            ..self.clone()
        }
    }

    fn invalid(&self, reason: impl Into<String>) -> FamilyError {
        FamilyError::InvalidParameter {
            kind: self.kind,
            reason: reason.into(),
        }
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        if self.m < 1 {
            return Err(self.invalid("requires m ≥ 1"));
        }
        match self.kind {
            FamilyKind::PowerDerivative | FamilyKind::PowerDerivativeShifted => {
                if self.n.is_some() || self.l.is_some() {
                    return Err(self.invalid("takes no n or l"));
                }
            }
            FamilyKind::BinomialPower => {
                let (Some(n), Some(l)) = (self.n, self.l) else {
                    return Err(self.invalid("requires both n and l"));
                };
                if l < 1 {
                    return Err(self.invalid("requires l ≥ 1"));
                }
                if n < l {
                    return Err(self.invalid(format!("requires n ≥ l (got n = {n}, l = {l})")));
                }
            }
            FamilyKind::BinomialPascal => {
                let Some(n) = self.n else {
                    return Err(self.invalid("requires n"));
                };
                if self.l.is_some() {
                    return Err(self.invalid("takes no l"));
                }
                if self.m > n {
                    return Err(self.invalid(format!("requires m ≤ n (got m = {}, n = {n})", self.m)));
                }
            }
        }
        if let (Assignment::Numeric(xs), true) = (&self.assignment, self.variable_count() > 0) {
            if xs.len() != self.m {
                return Err(FamilyError::AssignmentLength {
                    expected: self.m,
                    got: xs.len(),
                });
            }
        }
        Ok(())
    }

    /// Side length of the built matrix.
    pub fn size(&self) -> usize {
        match self.kind {
            FamilyKind::PowerDerivative | FamilyKind::PowerDerivativeShifted => 2 * self.m,
            FamilyKind::BinomialPower => self.m * self.l.unwrap_or(0),
            FamilyKind::BinomialPascal => self.m,
        }
    }

    /// Number of indeterminates; the Pascal family has none.
    pub fn variable_count(&self) -> usize {
        match self.kind {
            FamilyKind::BinomialPascal => 0,
            _ => self.m,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.assignment, Assignment::Symbolic)
    }

    pub fn closed_form(&self) -> ClosedForm {
        ClosedForm::for_kind(self.kind, self.m, self.l.unwrap_or(0))
    }

    /// `{kind, m, n?, l?, assignment: "symbolic" | ["p/q", ...]}`
    pub fn to_json(&self) -> Value {
        let mut doc = serde_json::Map::new();
        doc.insert("kind".into(), json!(self.kind.name()));
        doc.insert("m".into(), json!(self.m));
        if let Some(n) = self.n {
            doc.insert("n".into(), json!(n));
        }
        if let Some(l) = self.l {
            doc.insert("l".into(), json!(l));
        }
        let assignment = match &self.assignment {
            Assignment::Symbolic => json!("symbolic"),
            Assignment::Numeric(xs) => Value::Array(xs.iter().map(|x| json!(format_rational(x))).collect()),
        };
        doc.insert("assignment".into(), assignment);
        Value::Object(doc)
    }

    pub fn from_json(v: &Value) -> Result<Self, FamilyError> {
        let bad = |what: &str| FamilyError::Format(what.to_string());
        let kind: FamilyKind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing \"kind\""))?
            .parse()?;
        let field = |key: &str| v.get(key).and_then(Value::as_u64).map(|x| x as usize);
        let m = field("m").ok_or_else(|| bad("missing \"m\""))?;
        let assignment = match v.get("assignment") {
            None => Assignment::Symbolic,
            Some(Value::String(s)) if s == "symbolic" => Assignment::Symbolic,
            Some(Value::Array(items)) => Assignment::Numeric(
                items
                    .iter()
                    .map(|x| {
                        let s = x.as_str().ok_or_else(|| bad("assignment values must be strings"))?;
                        parse_rational(s).map_err(|e| FamilyError::Format(e.to_string()))
                    })
                    .collect::<Result<_, _>>()?,
            ),
            Some(other) => return Err(FamilyError::Format(format!("bad assignment {other}"))),
        };
        let spec = FamilySpec {
            kind,
            m,
            n: field("n"),
            l: field("l"),
            assignment,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} m={}", self.kind, self.m)?;
        if let Some(n) = self.n {
            write!(f, " n={n}")?;
        }
        if let Some(l) = self.l {
            write!(f, " l={l}")?;
        }
        match &self.assignment {
            Assignment::Symbolic if self.kind == FamilyKind::BinomialPascal => Ok(()),
            Assignment::Symbolic => write!(f, " symbolic"),
            Assignment::Numeric(xs) => {
                let vals: Vec<String> = xs.iter().map(format_rational).collect();
                write!(f, " X=({})", vals.join(", "))
            }
        }
    }
}

/// `(-1)^sign_exponent * prod_i X_i^variable_power * prod_{i<j} (X_j - X_i)^difference_power`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosedForm {
    pub sign_exponent: u64,
    pub variable_power: u32,
    pub difference_power: u32,
}

impl ClosedForm {
    pub fn for_kind(kind: FamilyKind, m: usize, l: usize) -> Self {
        let m = m as u64;
        let l = l as u32;
        match kind {
            FamilyKind::PowerDerivative => ClosedForm {
                sign_exponent: m * m.saturating_sub(1) / 2,
                variable_power: 1,
                difference_power: 4,
            },
            FamilyKind::PowerDerivativeShifted => ClosedForm {
                sign_exponent: m * m.saturating_sub(1) / 2,
                variable_power: 4,
                difference_power: 4,
            },
            FamilyKind::BinomialPower => ClosedForm {
                sign_exponent: 0,
                variable_power: l * l.saturating_sub(1) / 2,
                difference_power: l * l,
            },
            FamilyKind::BinomialPascal => ClosedForm {
                sign_exponent: 0,
                variable_power: 0,
                difference_power: 0,
            },
        }
    }

    /// Evaluates the product at `xs`; empty products are one.
    pub fn evaluate<R: Scalar>(&self, ring: &R::Ring, xs: &[R]) -> R {
        let mut acc = ring.one();
        if self.variable_power > 0 {
            for x in xs {
                acc = acc * &x.pow(self.variable_power);
            }
        }
        if self.difference_power > 0 {
            for j in 0..xs.len() {
                for i in 0..j {
                    acc = acc * &(xs[j].clone() - &xs[i]).pow(self.difference_power);
                }
            }
        }
        if self.sign_exponent % 2 == 1 {
            -acc
        } else {
            acc
        }
    }
}

/// `[1, x, ..., x^(count-1)]`
pub(crate) fn powers<R: Scalar>(ring: &R::Ring, x: &R, count: usize) -> Vec<R> {
    let mut out = Vec::with_capacity(count);
    let mut cur = ring.one();
    for _ in 0..count {
        let next = cur.clone() * x;
        out.push(cur);
        cur = next;
    }
    out
}

/// `2m x 2m`: rows `[X_i^(j-1)]` for each `i`, then rows `[j X_i^(j-1)]`.
pub fn power_derivative_matrix<R: Scalar>(ring: &R::Ring, xs: &[R]) -> Matrix<R> {
    let m = xs.len();
    let size = 2 * m;
    let pw: Vec<Vec<R>> = xs.iter().map(|x| powers(ring, x, size)).collect();
    Matrix::from_fn(ring.clone(), size, size, |r, c| {
        if r < m {
            pw[r][c].clone()
        } else {
            ring.int(c as i64 + 1) * &pw[r - m][c]
        }
    })
}

/// `2m x 2m`: rows `[X_i^(j+1)]`, then rows `[(j+1) X_i^j]`.
pub fn shifted_power_derivative_matrix<R: Scalar>(ring: &R::Ring, xs: &[R]) -> Matrix<R> {
    let m = xs.len();
    let size = 2 * m;
    let pw: Vec<Vec<R>> = xs.iter().map(|x| powers(ring, x, size + 2)).collect();
    Matrix::from_fn(ring.clone(), size, size, |r, c| {
        let j = c + 1;
        if r < m {
            pw[r][j + 1].clone()
        } else {
            ring.int(j as i64 + 1) * &pw[r - m][j]
        }
    })
}

/// Stacks one block per `(x, rows)`: row `k` (1-based) of a block, column
/// `j`, holds `C(n + j - 1, k - 1) * x^(j-1)`. The matrix has as many
/// columns as rows in total.
pub fn binomial_block_matrix<R: Scalar>(ring: &R::Ring, n: usize, blocks: &[(R, usize)]) -> Matrix<R> {
    let size: usize = blocks.iter().map(|(_, rows)| rows).sum();
    let mut rows = Vec::with_capacity(size);
    for (x, count) in blocks {
        let pw = powers(ring, x, size);
        for k in 0..*count {
            rows.push(
                (0..size)
                    .map(|c| ring.integer(&binomial_u64((n + c) as u64, k as u64)) * &pw[c])
                    .collect(),
            );
        }
    }
    Matrix::from_rows(ring.clone(), rows).expect("rectangular by construction")
}

/// The `ml x ml` binomial-power matrix: `l` rows per variable.
pub fn binomial_power_matrix<R: Scalar>(ring: &R::Ring, xs: &[R], n: usize, l: usize) -> Matrix<R> {
    let blocks: Vec<(R, usize)> = xs.iter().map(|x| (x.clone(), l)).collect();
    binomial_block_matrix(ring, n, &blocks)
}

/// `m x m` matrix with entry `C(n + j - 1, i - 1)` at row `i`, column `j`.
pub fn pascal_matrix<R: Scalar>(ring: &R::Ring, n: usize, m: usize) -> Matrix<R> {
    Matrix::from_fn(ring.clone(), m, m, |i, j| {
        ring.integer(&binomial_u64((n + j) as u64, i as u64))
    })
}

/// Rows `[1, x_i, ..., x_i^(m-1)]`.
pub fn vandermonde_matrix<R: Scalar>(ring: &R::Ring, xs: &[R]) -> Matrix<R> {
    let m = xs.len();
    let rows = xs.iter().map(|x| powers(ring, x, m)).collect();
    Matrix::from_rows(ring.clone(), rows).expect("square by construction")
}

/// `prod_{i<j} (x_j - x_i)`
pub fn vandermonde_product<R: Scalar>(ring: &R::Ring, xs: &[R]) -> R {
    ClosedForm {
        sign_exponent: 0,
        variable_power: 0,
        difference_power: 1,
    }
    .evaluate(ring, xs)
}

fn build_in<R: Scalar>(spec: &FamilySpec, ring: &R::Ring, xs: &[R]) -> Matrix<R> {
    match spec.kind {
        FamilyKind::PowerDerivative => power_derivative_matrix(ring, xs),
        FamilyKind::PowerDerivativeShifted => shifted_power_derivative_matrix(ring, xs),
        FamilyKind::BinomialPower => binomial_power_matrix(ring, xs, spec.n.unwrap(), spec.l.unwrap()),
        FamilyKind::BinomialPascal => pascal_matrix(ring, spec.n.unwrap(), spec.m),
    }
}

fn symbolic_vars(spec: &FamilySpec) -> (PolyRing, Vec<crate::MultiPoly>) {
    let ring = PolyRing::new(spec.m);
    let xs = ring.vars();
    (ring, xs)
}

/// Builds the family's matrix: integers for the Pascal family, polynomials
/// for symbolic assignments, rationals for numeric ones.
pub fn build(spec: &FamilySpec) -> Result<AnyMatrix, FamilyError> {
    spec.validate()?;
    Ok(match (&spec.assignment, spec.kind) {
        (_, FamilyKind::BinomialPascal) => AnyMatrix::Int(build_in(spec, &IntegerRing, &[])),
        (Assignment::Symbolic, _) => {
            let (ring, xs) = symbolic_vars(spec);
            AnyMatrix::Poly(build_in(spec, &ring, &xs))
        }
        (Assignment::Numeric(xs), _) => AnyMatrix::Rat(build_in(spec, &RationalField, xs)),
    })
}

/// Evaluates the family's product formula in the same ring [`build`] uses.
pub fn closed_form_det(spec: &FamilySpec) -> Result<AnyScalar, FamilyError> {
    spec.validate()?;
    let form = spec.closed_form();
    Ok(match (&spec.assignment, spec.kind) {
        (_, FamilyKind::BinomialPascal) => AnyScalar::Int(form.evaluate::<Integer>(&IntegerRing, &[])),
        (Assignment::Symbolic, _) => {
            let (ring, xs) = symbolic_vars(spec);
            AnyScalar::Poly(form.evaluate(&ring, &xs))
        }
        (Assignment::Numeric(xs), _) => AnyScalar::Rat(form.evaluate(&RationalField, xs)),
    })
}

/// Largest matrix side accepted per mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeGuard {
    pub symbolic: usize,
    pub numeric: usize,
}

impl Default for SizeGuard {
    fn default() -> Self {
        SizeGuard {
            symbolic: 8,
            numeric: 40,
        }
    }
}

impl SizeGuard {
    pub fn check(&self, spec: &FamilySpec) -> Result<(), FamilyError> {
        let (mode, max) = if spec.is_symbolic() && spec.kind != FamilyKind::BinomialPascal {
            ("symbolic", self.symbolic)
        } else {
            ("numeric", self.numeric)
        };
        let size = spec.size();
        if size > max {
            return Err(FamilyError::SizeGuard { mode, size, max });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub spec: FamilySpec,
    pub size: usize,
    /// Fraction-free elimination on the built matrix.
    pub det_oracle: AnyScalar,
    pub det_closed_form: AnyScalar,
    pub equal: bool,
}

impl VerificationReport {
    pub fn verdict(&self) -> &'static str {
        if self.equal {
            "equal"
        } else {
            "mismatch"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "spec": self.spec.to_json(),
            "size": self.size,
            "det_oracle": self.det_oracle.to_string(),
            "det_closed_form": self.det_closed_form.to_string(),
            "verdict": self.verdict(),
        })
    }
}

/// Computes both sides of the family's identity and compares them exactly.
pub fn verify_identity(spec: &FamilySpec) -> Result<VerificationReport, FamilyError> {
    verify_identity_with(spec, &SizeGuard::default())
}

pub fn verify_identity_with(spec: &FamilySpec, guard: &SizeGuard) -> Result<VerificationReport, FamilyError> {
    spec.validate()?;
    guard.check(spec)?;
    let det_oracle = match build(spec)? {
        AnyMatrix::Int(m) => AnyScalar::Int(m.det_bareiss()?),
        AnyMatrix::Rat(m) => AnyScalar::Rat(m.det_bareiss()?),
        AnyMatrix::Poly(m) => AnyScalar::Poly(m.det_bareiss()?),
    };
    let det_closed_form = closed_form_det(spec)?;
    let equal = det_oracle == det_closed_form;
    Ok(VerificationReport {
        spec: spec.clone(),
        size: spec.size(),
        det_oracle,
        det_closed_form,
        equal,
    })
}

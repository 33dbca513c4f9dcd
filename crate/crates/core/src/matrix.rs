//! Dense matrices over an exact ring, elementary operations, and two
//! independent determinant oracles.
//!
//! Matrices are row-major and immutable from the outside: [`Matrix::apply`]
//! returns a fresh matrix together with the factor relating the two
//! determinants, `det(old) = multiplier * det(new)`.

use std::fmt;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::arith::{format_rational, parse_integer, parse_rational, ArithError, Integer, Rational};
use crate::multipoly::{MultiPoly, PolyRing};
use crate::scalar::{IntegerRing, RationalField, RingKind, Scalar, ScalarRing};

/// Largest size the cofactor oracle accepts (6! = 720 terms).
pub const COFACTOR_MAX: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("expected {expected} entries for the declared shape, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("ragged rows: row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },
    #[error("{what} index {index} out of range (bound {bound})")]
    Index {
        what: &'static str,
        index: usize,
        bound: usize,
    },
    #[error("source and destination must differ (both {0})")]
    SameIndex(usize),
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("cofactor expansion limited to {max}x{max}, got {size}x{size}")]
    SizeGuard { size: usize, max: usize },
    #[error("row {row} is not a single-entry row at column {col}")]
    NotUnitRow { row: usize, col: usize },
    #[error("cannot factor {factor} out of {what} {index}: {source}")]
    InexactFactor {
        what: &'static str,
        index: usize,
        factor: String,
        source: ArithError,
    },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("malformed matrix document: {0}")]
    Format(String),
}

/// Row and column operations. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub enum ElementaryOp<R> {
    /// `col[dst] += scale * col[src]`
    AddScaledColumn { src: usize, dst: usize, scale: R },
    /// `row[dst] += scale * row[src]`
    AddScaledRow { src: usize, dst: usize, scale: R },
    /// Divide every entry of `row` by `factor`.
    FactorOutRow { row: usize, factor: R },
    FactorOutColumn { col: usize, factor: R },
    SwapRows { a: usize, b: usize },
    /// Remove the row at `from` and reinsert it at `to`.
    MoveRow { from: usize, to: usize },
    /// Laplace-expand along `row`, which must be zero outside `col`.
    DeleteRowCol { row: usize, col: usize },
}

impl<R: fmt::Display> fmt::Display for ElementaryOp<R> {
    /// Human-readable, 1-based form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryOp::AddScaledColumn { src, dst, scale } => {
                write!(f, "col {} += ({}) * col {}", dst + 1, scale, src + 1)
            }
            ElementaryOp::AddScaledRow { src, dst, scale } => {
                write!(f, "row {} += ({}) * row {}", dst + 1, scale, src + 1)
            }
            ElementaryOp::FactorOutRow { row, factor } => write!(f, "factor ({}) out of row {}", factor, row + 1),
            ElementaryOp::FactorOutColumn { col, factor } => {
                write!(f, "factor ({}) out of col {}", factor, col + 1)
            }
            ElementaryOp::SwapRows { a, b } => write!(f, "swap rows {} and {}", a + 1, b + 1),
            ElementaryOp::MoveRow { from, to } => write!(f, "move row {} to position {}", from + 1, to + 1),
            ElementaryOp::DeleteRowCol { row, col } => write!(f, "expand along row {}, delete col {}", row + 1, col + 1),
        }
    }
}

/// `det(old) = (-1)^negate * factor * det(new)`; a missing factor means one.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplier<R> {
    pub negate: bool,
    pub factor: Option<R>,
}

impl<R: Scalar> Multiplier<R> {
    pub fn unit() -> Self {
        Multiplier {
            negate: false,
            factor: None,
        }
    }

    pub fn value(&self, ring: &R::Ring) -> R {
        let v = self.factor.clone().unwrap_or_else(|| ring.one());
        if self.negate {
            -v
        } else {
            v
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<R: Scalar> {
    ring: R::Ring,
    rows: usize,
    cols: usize,
    entries: Vec<R>,
}

impl<R: Scalar> Matrix<R> {
    pub fn new(ring: R::Ring, rows: usize, cols: usize, entries: Vec<R>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Matrix {
            ring,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(ring: R::Ring, rows: Vec<Vec<R>>) -> Result<Self, MatrixError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(MatrixError::Ragged {
                    row: i,
                    expected: n_cols,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Self::new(ring, n_rows, n_cols, entries)
    }

    pub fn from_fn(ring: R::Ring, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            ring,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(ring: R::Ring, n: usize) -> Self {
        let (zero, one) = (ring.zero(), ring.one());
        Self::from_fn(ring, n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn ring(&self) -> &R::Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[R] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn check_row(&self, i: usize) -> Result<(), MatrixError> {
        if i >= self.rows {
            return Err(MatrixError::Index {
                what: "row",
                index: i,
                bound: self.rows,
            });
        }
        Ok(())
    }

    fn check_col(&self, j: usize) -> Result<(), MatrixError> {
        if j >= self.cols {
            return Err(MatrixError::Index {
                what: "column",
                index: j,
                bound: self.cols,
            });
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ring.clone(), self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self, MatrixError> {
        for &i in rows {
            self.check_row(i)?;
        }
        for &j in cols {
            self.check_col(j)?;
        }
        Ok(Self::from_fn(self.ring.clone(), rows.len(), cols.len(), |a, b| {
            self.get(rows[a], cols[b]).clone()
        }))
    }

    pub fn delete_row(&self, row: usize) -> Result<Self, MatrixError> {
        self.check_row(row)?;
        let keep: Vec<usize> = (0..self.rows).filter(|&i| i != row).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(&keep, &cols)
    }

    pub fn delete_col(&self, col: usize) -> Result<Self, MatrixError> {
        self.check_col(col)?;
        let rows: Vec<usize> = (0..self.rows).collect();
        let keep: Vec<usize> = (0..self.cols).filter(|&j| j != col).collect();
        self.submatrix(&rows, &keep)
    }

    pub fn map_entries<S: Scalar>(&self, ring: S::Ring, f: impl FnMut(&R) -> S) -> Matrix<S> {
        Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn apply(&self, op: &ElementaryOp<R>) -> Result<(Self, Multiplier<R>), MatrixError> {
        let mut out = self.clone();
        let mult = out.apply_in_place(op)?;
        Ok((out, mult))
    }

    /// In-place form of [`Matrix::apply`] for owners of a private working copy.
    /// On error the matrix is left unchanged.
    pub(crate) fn apply_in_place(&mut self, op: &ElementaryOp<R>) -> Result<Multiplier<R>, MatrixError> {
        let cols = self.cols;
        match op {
            ElementaryOp::AddScaledColumn { src, dst, scale } => {
                self.check_col(*src)?;
                self.check_col(*dst)?;
                if src == dst {
                    return Err(MatrixError::SameIndex(*src));
                }
                if !scale.is_zero_elem() {
                    for i in 0..self.rows {
                        let delta = scale.clone() * &self.entries[i * cols + src];
                        let cell = &mut self.entries[i * cols + dst];
                        *cell = cell.clone() + delta;
                    }
                }
                Ok(Multiplier::unit())
            }
            ElementaryOp::AddScaledRow { src, dst, scale } => {
                self.check_row(*src)?;
                self.check_row(*dst)?;
                if src == dst {
                    return Err(MatrixError::SameIndex(*src));
                }
                if !scale.is_zero_elem() {
                    for j in 0..cols {
                        let delta = scale.clone() * &self.entries[src * cols + j];
                        let cell = &mut self.entries[dst * cols + j];
                        *cell = cell.clone() + delta;
                    }
                }
                Ok(Multiplier::unit())
            }
            ElementaryOp::FactorOutRow { row, factor } => {
                self.check_row(*row)?;
                let divided = self
                    .row(*row)
                    .iter()
                    .map(|e| e.exact_div(factor))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|source| MatrixError::InexactFactor {
                        what: "row",
                        index: *row,
                        factor: factor.to_string(),
                        source,
                    })?;
                self.entries[row * cols..(row + 1) * cols].clone_from_slice(&divided);
                Ok(Multiplier {
                    negate: false,
                    factor: Some(factor.clone()),
                })
            }
            ElementaryOp::FactorOutColumn { col, factor } => {
                self.check_col(*col)?;
                let divided = (0..self.rows)
                    .map(|i| self.get(i, *col).exact_div(factor))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|source| MatrixError::InexactFactor {
                        what: "column",
                        index: *col,
                        factor: factor.to_string(),
                        source,
                    })?;
                for (i, v) in divided.into_iter().enumerate() {
                    self.entries[i * cols + col] = v;
                }
                Ok(Multiplier {
                    negate: false,
                    factor: Some(factor.clone()),
                })
            }
            ElementaryOp::SwapRows { a, b } => {
                self.check_row(*a)?;
                self.check_row(*b)?;
                if a == b {
                    return Ok(Multiplier::unit());
                }
                for j in 0..cols {
                    self.entries.swap(a * cols + j, b * cols + j);
                }
                Ok(Multiplier {
                    negate: true,
                    factor: None,
                })
            }
            ElementaryOp::MoveRow { from, to } => {
                self.check_row(*from)?;
                self.check_row(*to)?;
                let moved: Vec<R> = self.entries.drain(from * cols..(from + 1) * cols).collect();
                let at = to * cols;
                self.entries.splice(at..at, moved);
                Ok(Multiplier {
                    negate: from.abs_diff(*to) % 2 == 1,
                    factor: None,
                })
            }
            ElementaryOp::DeleteRowCol { row, col } => {
                self.check_row(*row)?;
                self.check_col(*col)?;
                let unit_row = self.row(*row).iter().enumerate().all(|(j, e)| j == *col || e.is_zero_elem());
                if !unit_row {
                    return Err(MatrixError::NotUnitRow { row: *row, col: *col });
                }
                let pivot = self.get(*row, *col).clone();
                let (r, c) = (*row, *col);
                let entries = std::mem::take(&mut self.entries);
                self.entries = entries
                    .into_iter()
                    .enumerate()
                    .filter(|(k, _)| k / cols != r && k % cols != c)
                    .map(|(_, e)| e)
                    .collect();
                self.rows -= 1;
                self.cols -= 1;
                Ok(Multiplier {
                    negate: (r + c) % 2 == 1,
                    factor: Some(pivot),
                })
            }
        }
    }

    /// Determinant by Laplace expansion along the first row. Limited to
    /// [`COFACTOR_MAX`]; the 0x0 determinant is one.
    pub fn det_cofactor(&self) -> Result<R, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows > COFACTOR_MAX {
            return Err(MatrixError::SizeGuard {
                size: self.rows,
                max: COFACTOR_MAX,
            });
        }
        let mut cols: Vec<usize> = (0..self.cols).collect();
        Ok(self.cofactor_rec(0, &mut cols))
    }

    fn cofactor_rec(&self, row: usize, cols: &mut Vec<usize>) -> R {
        if cols.is_empty() {
            return self.ring.one();
        }
        let mut acc = self.ring.zero();
        for pos in 0..cols.len() {
            let col = cols[pos];
            let entry = self.get(row, col);
            if entry.is_zero_elem() {
                continue;
            }
            cols.remove(pos);
            let minor = self.cofactor_rec(row + 1, cols);
            cols.insert(pos, col);
            let term = entry.clone() * &minor;
            acc = if pos % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    /// Determinant by single-step fraction-free (Bareiss) elimination.
    ///
    /// Pivot is the first nonzero entry at or below the diagonal; each row
    /// swap flips the sign. Every division is exact in an integral domain, so
    /// an inexact-division error here points at a broken ring implementation.
    pub fn det_bareiss(&self) -> Result<R, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        R::det_fraction_free(self)
    }

    /// Bareiss elimination with every division done in `R`.
    pub(crate) fn bareiss_in_ring(&self) -> Result<R, MatrixError> {
        let n = self.rows;
        if n == 0 {
            return Ok(self.ring.one());
        }
        let mut a: Vec<Vec<R>> = self.to_rows();
        let mut prev = self.ring.one();
        let mut negate = false;
        for k in 0..n - 1 {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero_elem()) else {
                return Ok(self.ring.zero());
            };
            if p != k {
                a.swap(p, k);
                negate = !negate;
            }
            let (top, bottom) = a.split_at_mut(k + 1);
            let pivot_row = &top[k];
            let pivot = &pivot_row[k];
            for row in bottom.iter_mut() {
                let lead = row[k].clone();
                for j in k + 1..n {
                    let cross = row[j].clone() * pivot - lead.clone() * &pivot_row[j];
                    row[j] = cross.exact_div(&prev)?;
                }
                row[k] = self.ring.zero();
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if negate { -det } else { det })
    }
}

impl<R: Scalar> fmt::Display for Matrix<R> {
    /// `[[a, b], [c, d]]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// JSON encoding of ring elements and their ring context.
///
/// Integers are decimal strings, rationals `"p/q"` strings, polynomials lists
/// of `[exponents, "coefficient"]` pairs with the variable count stored once
/// on the enclosing document as `"vars"`.
pub trait JsonScalar: Scalar {
    fn encode(&self) -> Value;
    fn decode(ring: &Self::Ring, v: &Value) -> Result<Self, MatrixError>;
    fn encode_ring(ring: &Self::Ring, doc: &mut Map<String, Value>);
    fn decode_ring(doc: &Map<String, Value>) -> Result<Self::Ring, MatrixError>;
}

fn as_str(v: &Value) -> Result<&str, MatrixError> {
    v.as_str()
        .ok_or_else(|| MatrixError::Format(format!("expected a string, found {v}")))
}

impl JsonScalar for Integer {
    fn encode(&self) -> Value {
        Value::String(self.to_string())
    }
    fn decode(_: &IntegerRing, v: &Value) -> Result<Self, MatrixError> {
        Ok(parse_integer(as_str(v)?)?)
    }
    fn encode_ring(_: &IntegerRing, _: &mut Map<String, Value>) {}
    fn decode_ring(_: &Map<String, Value>) -> Result<IntegerRing, MatrixError> {
        Ok(IntegerRing)
    }
}

impl JsonScalar for Rational {
    fn encode(&self) -> Value {
        Value::String(format_rational(self))
    }
    fn decode(_: &RationalField, v: &Value) -> Result<Self, MatrixError> {
        Ok(parse_rational(as_str(v)?)?)
    }
    fn encode_ring(_: &RationalField, _: &mut Map<String, Value>) {}
    fn decode_ring(_: &Map<String, Value>) -> Result<RationalField, MatrixError> {
        Ok(RationalField)
    }
}

impl JsonScalar for MultiPoly {
    fn encode(&self) -> Value {
        Value::Array(
            self.to_terms()
                .into_iter()
                .map(|(exps, c)| json!([exps, c.to_string()]))
                .collect(),
        )
    }

    fn decode(ring: &PolyRing, v: &Value) -> Result<Self, MatrixError> {
        let bad = || MatrixError::Format(format!("expected [[exponents], \"coefficient\"] pairs, found {v}"));
        let pairs = v.as_array().ok_or_else(bad)?;
        let mut terms = Vec::with_capacity(pairs.len());
        for pair in pairs {
            let pair = pair.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let exps = pair[0]
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|e| e.as_u64().and_then(|e| u32::try_from(e).ok()).ok_or_else(bad))
                .collect::<Result<Vec<u32>, _>>()?;
            terms.push((exps, parse_integer(as_str(&pair[1])?)?));
        }
        Ok(MultiPoly::from_terms(ring.vars, terms)?)
    }

    fn encode_ring(ring: &PolyRing, doc: &mut Map<String, Value>) {
        doc.insert("vars".into(), json!(ring.vars));
    }

    fn decode_ring(doc: &Map<String, Value>) -> Result<PolyRing, MatrixError> {
        let vars = doc
            .get("vars")
            .and_then(Value::as_u64)
            .ok_or_else(|| MatrixError::Format("polynomial matrix needs \"vars\"".into()))?;
        Ok(PolyRing::new(vars as usize))
    }
}

impl<R: JsonScalar> Matrix<R> {
    /// `{"rows", "cols", "ring", ["vars",] "entries"}` with row-major entries.
    pub fn to_json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("rows".into(), json!(self.rows));
        doc.insert("cols".into(), json!(self.cols));
        doc.insert("ring".into(), json!(<R::Ring as ScalarRing>::KIND.as_str()));
        R::encode_ring(&self.ring, &mut doc);
        doc.insert("entries".into(), Value::Array(self.entries.iter().map(R::encode).collect()));
        Value::Object(doc)
    }

    pub fn from_json(v: &Value) -> Result<Self, MatrixError> {
        let doc = v
            .as_object()
            .ok_or_else(|| MatrixError::Format("expected a JSON object".into()))?;
        let tag = doc.get("ring").and_then(Value::as_str).unwrap_or_default();
        let want = <R::Ring as ScalarRing>::KIND.as_str();
        if tag != want {
            return Err(MatrixError::Format(format!("ring {tag:?} where {want:?} was expected")));
        }
        let dim = |key: &str| {
            doc.get(key)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| MatrixError::Format(format!("missing \"{key}\"")))
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let ring = R::decode_ring(doc)?;
        let entries = doc
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| MatrixError::Format("missing \"entries\"".into()))?
            .iter()
            .map(|e| R::decode(&ring, e))
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::new(ring, rows, cols, entries)
    }
}

/// A matrix over whichever ground ring a computation ended up in.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Int(Matrix<Integer>),
    Rat(Matrix<Rational>),
    Poly(Matrix<MultiPoly>),
}

impl AnyMatrix {
    pub fn kind(&self) -> RingKind {
        match self {
            AnyMatrix::Int(_) => RingKind::Int,
            AnyMatrix::Rat(_) => RingKind::Rat,
            AnyMatrix::Poly(_) => RingKind::Poly,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            AnyMatrix::Int(m) => m.shape(),
            AnyMatrix::Rat(m) => m.shape(),
            AnyMatrix::Poly(m) => m.shape(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyMatrix::Int(m) => m.to_json(),
            AnyMatrix::Rat(m) => m.to_json(),
            AnyMatrix::Poly(m) => m.to_json(),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, MatrixError> {
        match v.get("ring").and_then(Value::as_str) {
            Some("int") => Ok(AnyMatrix::Int(Matrix::from_json(v)?)),
            Some("rat") => Ok(AnyMatrix::Rat(Matrix::from_json(v)?)),
            Some("poly") => Ok(AnyMatrix::Poly(Matrix::from_json(v)?)),
            other => Err(MatrixError::Format(format!("unknown ring {other:?}"))),
        }
    }
}

impl fmt::Display for AnyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyMatrix::Int(m) => m.fmt(f),
            AnyMatrix::Rat(m) => m.fmt(f),
            AnyMatrix::Poly(m) => m.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    fn int_matrix(rows: &[&[i64]]) -> Matrix<Integer> {
        Matrix::from_rows(
            IntegerRing,
            rows.iter().map(|r| r.iter().map(|&v| Integer::from(v)).collect()).collect(),
        )
        .unwrap()
    }

    fn x1() -> MultiPoly {
        MultiPoly::var(1, 1).unwrap()
    }

    fn pc(v: i64) -> MultiPoly {
        MultiPoly::constant(Integer::from(v), 1)
    }

    #[test]
    fn add_scaled_column_on_identity() {
        let id = Matrix::<MultiPoly>::identity(PolyRing::new(1), 2);
        let (out, mult) = id
            .apply(&ElementaryOp::AddScaledColumn {
                src: 0,
                dst: 1,
                scale: x1(),
            })
            .unwrap();
        assert_eq!(out.to_string(), "[[1, X1], [0, 1]]");
        assert_eq!(mult, Multiplier::unit());
    }

    #[test]
    fn factor_out_row() {
        let m = Matrix::from_rows(
            PolyRing::new(1),
            vec![vec![pc(2) * x1(), pc(4) * x1()], vec![pc(1), pc(1)]],
        )
        .unwrap();
        let (out, mult) = m
            .apply(&ElementaryOp::FactorOutRow {
                row: 0,
                factor: pc(2) * x1(),
            })
            .unwrap();
        assert_eq!(out.to_string(), "[[1, 2], [1, 1]]");
        assert_eq!(mult.factor, Some(pc(2) * x1()));
        assert!(!mult.negate);
    }

    #[test]
    fn factor_out_rejects_inexact_and_zero() {
        let m = int_matrix(&[&[2, 3], &[1, 1]]);
        let err = m.apply(&ElementaryOp::FactorOutRow { row: 0, factor: Integer::from(2) });
        assert!(matches!(err, Err(MatrixError::InexactFactor { .. })));
        let err = m.apply(&ElementaryOp::FactorOutColumn { col: 1, factor: Integer::from(0) });
        assert!(matches!(err, Err(MatrixError::InexactFactor { .. })));
    }

    #[test]
    fn move_and_swap_signs() {
        let m = int_matrix(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let (out, mult) = m.apply(&ElementaryOp::MoveRow { from: 2, to: 0 }).unwrap();
        assert_eq!(out, int_matrix(&[&[0, 0, 3], &[1, 0, 0], &[0, 2, 0]]));
        assert!(!mult.negate);
        let (_, mult) = m.apply(&ElementaryOp::MoveRow { from: 1, to: 0 }).unwrap();
        assert!(mult.negate);
        let (out, mult) = m.apply(&ElementaryOp::SwapRows { a: 0, b: 2 }).unwrap();
        assert!(mult.negate);
        assert_eq!(out.det_bareiss().unwrap(), Integer::from(-6));
    }

    #[test]
    fn delete_row_col_requires_unit_row() {
        let m = int_matrix(&[&[1, 2], &[0, 5]]);
        assert!(matches!(
            m.apply(&ElementaryOp::DeleteRowCol { row: 0, col: 0 }),
            Err(MatrixError::NotUnitRow { row: 0, col: 0 })
        ));
        let (out, mult) = m.apply(&ElementaryOp::DeleteRowCol { row: 1, col: 1 }).unwrap();
        assert_eq!(out, int_matrix(&[&[1]]));
        assert_eq!(mult.value(&IntegerRing), Integer::from(5));
        let m = int_matrix(&[&[1, 2], &[7, 0]]);
        let (out, mult) = m.apply(&ElementaryOp::DeleteRowCol { row: 1, col: 0 }).unwrap();
        assert_eq!(out, int_matrix(&[&[2]]));
        assert_eq!(mult.value(&IntegerRing), Integer::from(-7));
        assert_eq!(m.det_bareiss().unwrap(), Integer::from(-14));
    }

    #[test]
    fn ops_reject_bad_indices() {
        let m = int_matrix(&[&[1, 2], &[3, 4]]);
        assert!(matches!(
            m.apply(&ElementaryOp::SwapRows { a: 0, b: 2 }),
            Err(MatrixError::Index { .. })
        ));
        assert!(matches!(
            m.apply(&ElementaryOp::AddScaledRow { src: 1, dst: 1, scale: Integer::from(1) }),
            Err(MatrixError::SameIndex(1))
        ));
    }

    #[test]
    fn cofactor_examples() {
        let m = Matrix::from_rows(PolyRing::new(1), vec![vec![pc(1), x1()], vec![pc(1), pc(2) * x1()]]).unwrap();
        assert_eq!(m.det_cofactor().unwrap(), x1());
        let empty = Matrix::<Integer>::new(IntegerRing, 0, 0, vec![]).unwrap();
        assert_eq!(empty.det_cofactor().unwrap(), Integer::from(1));
        assert_eq!(empty.det_bareiss().unwrap(), Integer::from(1));
        // power-derivative matrix at X = (1, 2)
        let m = int_matrix(&[&[1, 1, 1, 1], &[1, 2, 4, 8], &[1, 2, 3, 4], &[1, 4, 12, 32]]);
        assert_eq!(m.det_cofactor().unwrap(), Integer::from(-2));
        assert_eq!(m.det_bareiss().unwrap(), Integer::from(-2));
    }

    #[test]
    fn cofactor_guards() {
        let big = Matrix::<Integer>::identity(IntegerRing, 7);
        assert!(matches!(big.det_cofactor(), Err(MatrixError::SizeGuard { size: 7, max: 6 })));
        let rect = int_matrix(&[&[1, 2, 3]]);
        assert!(matches!(rect.det_cofactor(), Err(MatrixError::NotSquare { .. })));
        assert!(matches!(rect.det_bareiss(), Err(MatrixError::NotSquare { .. })));
    }

    #[test]
    fn bareiss_identity_and_vandermonde() {
        for n in 1..=5 {
            assert_eq!(Matrix::<Integer>::identity(IntegerRing, n).det_bareiss().unwrap(), Integer::from(1));
        }
        let ring = PolyRing::new(2);
        let (a, b) = (ring.var(1).unwrap(), ring.var(2).unwrap());
        let one = ring.one();
        let m = Matrix::from_rows(ring, vec![vec![one.clone(), a.clone()], vec![one, b.clone()]]).unwrap();
        assert_eq!(m.det_bareiss().unwrap(), b - a);
    }

    #[test]
    fn bareiss_needs_pivot_search() {
        let m = int_matrix(&[&[0, 1, 2], &[3, 0, 1], &[4, 5, 0]]);
        assert_eq!(m.det_bareiss().unwrap(), m.det_cofactor().unwrap());
        let singular = int_matrix(&[&[0, 1], &[0, 2]]);
        assert_eq!(singular.det_bareiss().unwrap(), Integer::from(0));
    }

    #[test]
    fn structural_helpers() {
        let m = int_matrix(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(m.delete_row(1).unwrap().shape(), (2, 3));
        assert_eq!(m.delete_col(0).unwrap(), int_matrix(&[&[2, 3], &[5, 6], &[8, 9]]));
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.submatrix(&[0, 1, 2], &[0, 1, 2]).unwrap(), m);
        assert!(m.delete_row(3).is_err());
        let r = m.map_entries(RationalField, |v| Rational::from_integer(v.clone()) / rational(2, 1));
        assert_eq!(r.get(0, 0), &rational(1, 2));
        assert!(Matrix::<Integer>::new(IntegerRing, 2, 2, vec![Integer::from(1)]).is_err());
    }

    #[test]
    fn json_round_trip_all_rings() {
        let m = int_matrix(&[&[1, -2], &[3, 4]]);
        let v = m.to_json();
        assert_eq!(v, json!({"rows": 2, "cols": 2, "ring": "int", "entries": ["1", "-2", "3", "4"]}));
        assert_eq!(Matrix::<Integer>::from_json(&v).unwrap(), m);

        let r = Matrix::from_rows(RationalField, vec![vec![rational(1, 3), rational(-5, 2)]]).unwrap();
        assert_eq!(r.to_json()["entries"], json!(["1/3", "-5/2"]));
        assert_eq!(Matrix::<Rational>::from_json(&r.to_json()).unwrap(), r);

        let ring = PolyRing::new(2);
        let p = Matrix::from_rows(
            ring,
            vec![vec![ring.one(), ring.var(1).unwrap() * ring.var(2).unwrap() - ring.int(3)], vec![ring.zero(), ring.var(2).unwrap()]],
        )
        .unwrap();
        let v = p.to_json();
        assert_eq!(v["vars"], json!(2));
        assert_eq!(v["entries"][1], json!([[[1, 1], "1"], [[0, 0], "-3"]]));
        assert_eq!(AnyMatrix::from_json(&v).unwrap(), AnyMatrix::Poly(p));
        assert!(Matrix::<Integer>::from_json(&v).is_err());
    }
}

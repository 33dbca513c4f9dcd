//! Determinant reductions that emit checkable factorization certificates.
//!
//! Each engine starts from a family matrix and applies elementary operations
//! one at a time through a [`Recorder`]. Every operation's determinant
//! multiplier is split into a sign (kept on the certificate, never folded into
//! a factor) and a ring factor (appended to the factor list). The invariant
//! after every step is
//!
//! ```text
//! det(original) = sign * prod(factors) * det(current)
//! ```
//!
//! and each engine drives `current` down to the 0x0 matrix, so the final
//! `sign * prod(factors)` is the determinant itself.

mod binomial;
mod pascal;
mod power;

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::families::{Assignment, FamilyError, FamilyKind, FamilySpec};
use crate::matrix::{ElementaryOp, JsonScalar, Matrix, MatrixError};
use crate::multipoly::{MultiPoly, PolyRing};
use crate::scalar::{product, RationalField, Scalar};
use crate::{Integer, Rational};

pub use binomial::{reduce_binomial_induction_l, reduce_binomial_induction_m, BlockLayout};
pub use pascal::reduce_pascal;
pub use power::{reduce_power_derivative, reduce_shifted};

/// Traces keep full matrix snapshots up to this side length.
pub const SNAPSHOT_MAX: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error("reduction needs distinct, nonzero values: {0}")]
    Degenerate(String),
    #[error("invalid reduction parameters: {0}")]
    Parameter(String),
    #[error("certificate and matrix live in different rings")]
    RingMismatch,
    #[error("engine {engine} cannot reduce the {family} family")]
    EngineFamily { engine: Engine, family: FamilyKind },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TraceOptions {
    /// Snapshot every stage regardless of size.
    pub full_snapshots: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledFactor<R> {
    pub label: String,
    pub value: R,
}

/// `det(original) = sign * prod(factors) * det(residual)`
#[derive(Debug, Clone, PartialEq)]
pub struct FactorCertificate<R: Scalar> {
    pub negative: bool,
    pub factors: Vec<LabeledFactor<R>>,
    pub residual: Matrix<R>,
}

impl<R: Scalar> FactorCertificate<R> {
    /// The trivial certificate: no factors, residual = `matrix`.
    pub fn identity(matrix: Matrix<R>) -> Self {
        FactorCertificate {
            negative: false,
            factors: Vec::new(),
            residual: matrix,
        }
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn factor_product(&self) -> R {
        product(self.residual.ring(), self.factors.iter().map(|f| f.value.clone()))
    }

    /// `sign * prod(factors)`; the determinant once the residual is 0x0.
    pub fn total(&self) -> R {
        let p = self.factor_product();
        if self.negative {
            -p
        } else {
            p
        }
    }
}

impl<R: JsonScalar> FactorCertificate<R> {
    pub fn to_json(&self) -> Value {
        json!({
            "sign": self.sign(),
            "factors": self.factors.iter().map(|f| json!({"label": f.label, "value": f.value.to_string()})).collect::<Vec<_>>(),
            "residual": self.residual.to_json(),
            "total": self.total().to_string(),
        })
    }
}

/// Checks `sign * prod(factors) * det(residual) == det(original)` exactly,
/// with both determinants from fraction-free elimination.
pub fn check_certificate<R: Scalar>(cert: &FactorCertificate<R>, original: &Matrix<R>) -> Result<bool, ReductionError> {
    if cert.residual.ring() != original.ring() {
        return Err(ReductionError::RingMismatch);
    }
    let lhs = cert.total() * &cert.residual.det_bareiss()?;
    Ok(lhs == original.det_bareiss()?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStage<R: Scalar> {
    /// Name of the intermediate matrix this operation produces, e.g. `A^(3)`.
    pub step: String,
    /// Where in the induction the step sits, e.g. `m=3 pivot X1`.
    pub context: String,
    pub op: String,
    pub factor: Option<R>,
    pub sign_delta: Option<i8>,
    pub shape: (usize, usize),
    pub snapshot: Option<Matrix<R>>,
    pub digest: Option<u64>,
    /// Certificate so far: accumulated sign and the length of the factor prefix.
    pub negative: bool,
    pub factor_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTrace<R: Scalar> {
    pub stages: Vec<TraceStage<R>>,
}

impl<R: JsonScalar> ReductionTrace<R> {
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.stages
                .iter()
                .map(|s| {
                    let mut doc = serde_json::Map::new();
                    doc.insert("step_label".into(), json!(s.step));
                    doc.insert("context".into(), json!(s.context));
                    doc.insert("op".into(), json!(s.op));
                    if let Some(f) = &s.factor {
                        doc.insert("factor".into(), json!(f.to_string()));
                    }
                    if let Some(d) = s.sign_delta {
                        doc.insert("sign_delta".into(), json!(d));
                    }
                    doc.insert("residual_shape".into(), json!([s.shape.0, s.shape.1]));
                    match (&s.snapshot, s.digest) {
                        (Some(m), _) => {
                            doc.insert("snapshot".into(), m.to_json());
                        }
                        (None, Some(d)) => {
                            doc.insert("digest".into(), json!(format!("{d:016x}")));
                        }
                        _ => {}
                    }
                    Value::Object(doc)
                })
                .collect(),
        )
    }
}

/// Output of one engine run.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction<R: Scalar> {
    pub original: Matrix<R>,
    pub certificate: FactorCertificate<R>,
    pub trace: ReductionTrace<R>,
}

impl<R: Scalar> Reduction<R> {
    pub fn total(&self) -> R {
        self.certificate.total()
    }

    pub fn check(&self) -> Result<bool, ReductionError> {
        check_certificate(&self.certificate, &self.original)
    }

    /// Re-checks the certificate invariant at every stage that kept a
    /// snapshot. Returns the number of stages checked, or the index of the
    /// first stage where the invariant fails.
    pub fn check_prefixes(&self) -> Result<Result<usize, usize>, ReductionError> {
        let target = self.original.det_bareiss()?;
        let ring = self.original.ring();
        let mut checked = 0;
        for (idx, stage) in self.trace.stages.iter().enumerate() {
            let Some(snapshot) = &stage.snapshot else { continue };
            let prefix = product(ring, self.certificate.factors[..stage.factor_count].iter().map(|f| f.value.clone()));
            let mut lhs = prefix * &snapshot.det_bareiss()?;
            if stage.negative {
                lhs = -lhs;
            }
            if lhs != target {
                return Ok(Err(idx));
            }
            checked += 1;
        }
        Ok(Ok(checked))
    }
}

impl<R: JsonScalar> Reduction<R> {
    pub fn to_json(&self) -> Value {
        json!({
            "original": self.original.to_json(),
            "trace": self.trace.to_json(),
            "certificate": self.certificate.to_json(),
        })
    }
}

fn digest<R: Scalar>(entries: &[R]) -> u64 {
    let mut h = DefaultHasher::new();
    entries.len().hash(&mut h);
    for e in entries {
        e.digest_into(&mut h);
    }
    h.finish()
}

/// Applies operations to a private working copy and books every multiplier.
pub(crate) struct Recorder<R: Scalar> {
    original: Matrix<R>,
    current: Matrix<R>,
    negative: bool,
    factors: Vec<LabeledFactor<R>>,
    stages: Vec<TraceStage<R>>,
    options: TraceOptions,
    context: String,
}

impl<R: Scalar> Recorder<R> {
    pub(crate) fn new(matrix: Matrix<R>, options: TraceOptions) -> Self {
        Recorder {
            current: matrix.clone(),
            original: matrix,
            negative: false,
            factors: Vec::new(),
            stages: Vec::new(),
            options,
            context: String::new(),
        }
    }

    pub(crate) fn current(&self) -> &Matrix<R> {
        &self.current
    }

    pub(crate) fn set_context(&mut self, context: impl Into<String>) {
        self.context = context.into();
    }

    pub(crate) fn apply(&mut self, step: &str, op: ElementaryOp<R>) -> Result<(), ReductionError> {
        let mult = self.current.apply_in_place(&op)?;
        let sign_delta = if mult.negate {
            self.negative = !self.negative;
            Some(-1)
        } else {
            None
        };
        let factor = mult.factor.filter(|f| !f.is_one_elem());
        if let Some(f) = &factor {
            self.factors.push(LabeledFactor {
                label: step.to_string(),
                value: f.clone(),
            });
        }
        let size = self.current.rows().max(self.current.cols());
        let keep = self.options.full_snapshots || size <= SNAPSHOT_MAX;
        self.stages.push(TraceStage {
            step: step.to_string(),
            context: self.context.clone(),
            op: op.to_string(),
            factor,
            sign_delta,
            shape: self.current.shape(),
            snapshot: keep.then(|| self.current.clone()),
            digest: (!keep).then(|| digest(self.current.entries())),
            negative: self.negative,
            factor_count: self.factors.len(),
        });
        Ok(())
    }

    /// `col[j] -= x * col[j-1]` for `j = last..1`, right to left so every
    /// step reads an untouched neighbour.
    pub(crate) fn sweep_columns(&mut self, step: &str, x: &R) -> Result<(), ReductionError> {
        for j in (1..self.current.cols()).rev() {
            self.apply(
                step,
                ElementaryOp::AddScaledColumn {
                    src: j - 1,
                    dst: j,
                    scale: -x.clone(),
                },
            )?;
        }
        Ok(())
    }

    pub(crate) fn finish(self) -> Reduction<R> {
        Reduction {
            original: self.original,
            certificate: FactorCertificate {
                negative: self.negative,
                factors: self.factors,
                residual: self.current,
            },
            trace: ReductionTrace { stages: self.stages },
        }
    }
}

/// Rejects repeated or zero values; the engines divide by `X_i` and by
/// `X_i - X_j`.
pub(crate) fn require_generic<R: Scalar>(xs: &[R]) -> Result<(), ReductionError> {
    if xs.is_empty() {
        return Err(ReductionError::Parameter("need at least one variable".into()));
    }
    for (i, x) in xs.iter().enumerate() {
        if x.is_zero_elem() {
            return Err(ReductionError::Degenerate(format!("X{} = 0", i + 1)));
        }
        if let Some(j) = xs[..i].iter().position(|y| y == x) {
            return Err(ReductionError::Degenerate(format!("X{} = X{} = {}", j + 1, i + 1, x)));
        }
    }
    Ok(())
}

/// The five reduction engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Power-derivative family, one variable per induction step.
    PowerDerivative,
    /// Shifted family: factor row powers, then the power-derivative engine.
    Shifted,
    /// Binomial-power family, removing one whole block per induction step.
    BinomialByBlock,
    /// Binomial-power family, removing one row from every block per step.
    BinomialByRow,
    Pascal,
}

impl Engine {
    pub const ALL: [Engine; 5] = [
        Engine::PowerDerivative,
        Engine::Shifted,
        Engine::BinomialByBlock,
        Engine::BinomialByRow,
        Engine::Pascal,
    ];

    /// CLI name.
    pub fn name(self) -> &'static str {
        match self {
            Engine::PowerDerivative => "thm1",
            Engine::Shifted => "cor2",
            Engine::BinomialByBlock => "thm3-m",
            Engine::BinomialByRow => "thm3-l",
            Engine::Pascal => "pascal",
        }
    }

    pub fn family(self) -> FamilyKind {
        match self {
            Engine::PowerDerivative => FamilyKind::PowerDerivative,
            Engine::Shifted => FamilyKind::PowerDerivativeShifted,
            Engine::BinomialByBlock | Engine::BinomialByRow => FamilyKind::BinomialPower,
            Engine::Pascal => FamilyKind::BinomialPascal,
        }
    }

    pub fn for_family(kind: FamilyKind) -> Vec<Engine> {
        Engine::ALL.into_iter().filter(|e| e.family() == kind).collect()
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "thm1" | "power-derivative" => Ok(Engine::PowerDerivative),
            "cor2" | "shifted" => Ok(Engine::Shifted),
            "thm3-m" | "binomial-by-block" => Ok(Engine::BinomialByBlock),
            "thm3-l" | "binomial-by-row" => Ok(Engine::BinomialByRow),
            "pascal" => Ok(Engine::Pascal),
            other => Err(ReductionError::Parameter(format!("unknown engine {other:?}"))),
        }
    }
}

/// A reduction over whichever ring the spec's assignment selects.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyReduction {
    Int(Reduction<Integer>),
    Rat(Reduction<Rational>),
    Poly(Reduction<MultiPoly>),
}

impl AnyReduction {
    pub fn check(&self) -> Result<bool, ReductionError> {
        match self {
            AnyReduction::Int(r) => r.check(),
            AnyReduction::Rat(r) => r.check(),
            AnyReduction::Poly(r) => r.check(),
        }
    }

    pub fn total(&self) -> crate::AnyScalar {
        match self {
            AnyReduction::Int(r) => crate::AnyScalar::Int(r.total()),
            AnyReduction::Rat(r) => crate::AnyScalar::Rat(r.total()),
            AnyReduction::Poly(r) => crate::AnyScalar::Poly(r.total()),
        }
    }

    pub fn stage_count(&self) -> usize {
        match self {
            AnyReduction::Int(r) => r.trace.stages.len(),
            AnyReduction::Rat(r) => r.trace.stages.len(),
            AnyReduction::Poly(r) => r.trace.stages.len(),
        }
    }

    pub fn check_prefixes(&self) -> Result<Result<usize, usize>, ReductionError> {
        match self {
            AnyReduction::Int(r) => r.check_prefixes(),
            AnyReduction::Rat(r) => r.check_prefixes(),
            AnyReduction::Poly(r) => r.check_prefixes(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyReduction::Int(r) => r.to_json(),
            AnyReduction::Rat(r) => r.to_json(),
            AnyReduction::Poly(r) => r.to_json(),
        }
    }
}

fn run_in<R: Scalar>(
    engine: Engine,
    spec: &FamilySpec,
    ring: &R::Ring,
    xs: &[R],
    options: TraceOptions,
) -> Result<Reduction<R>, ReductionError> {
    match engine {
        Engine::PowerDerivative => reduce_power_derivative(ring, xs, options),
        Engine::Shifted => reduce_shifted(ring, xs, options),
        Engine::BinomialByBlock => reduce_binomial_induction_m(ring, xs, spec.n.unwrap(), spec.l.unwrap(), options),
        Engine::BinomialByRow => reduce_binomial_induction_l(ring, xs, spec.n.unwrap(), spec.l.unwrap(), options),
        Engine::Pascal => unreachable!("pascal runs over the integers"),
    }
}

/// Runs `engine` on the matrix [`crate::families::build`] would produce for `spec`.
pub fn run_engine(engine: Engine, spec: &FamilySpec, options: TraceOptions) -> Result<AnyReduction, ReductionError> {
    spec.validate()?;
    if engine.family() != spec.kind {
        return Err(ReductionError::EngineFamily {
            engine,
            family: spec.kind,
        });
    }
    if engine == Engine::Pascal {
        return Ok(AnyReduction::Int(reduce_pascal(spec.n.unwrap(), spec.m, options)?));
    }
    Ok(match &spec.assignment {
        Assignment::Symbolic => {
            let ring = PolyRing::new(spec.m);
            AnyReduction::Poly(run_in(engine, spec, &ring, &ring.vars(), options)?)
        }
        Assignment::Numeric(xs) => AnyReduction::Rat(run_in(engine, spec, &RationalField, xs, options)?),
    })
}

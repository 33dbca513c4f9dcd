//! Reductions for the power-derivative family and its shifted variant.
//!
//! One induction step on `[X_i^(j-1); j X_i^(j-1)]` with pivot `X1`:
//!
//! 1. `A^(1)`: sweep columns by `X1`, expand along the first row (a unit row).
//! 2. `A^(2)`: move the `[X1, X1^2, ...]` row to the top, sign `(-1)^(m-1)`.
//! 3. `A^(3)`: factor `X_i - X1` out of every remaining first-block row.
//! 4. `A^(4)`, `A^(5)`: subtract `X_i` times the first-block row from its
//!    derivative row, then factor `X_i - X1` out of it.
//! 5. `A^(6)`, `A^(7)`: sweep by `X1` again; the top row becomes `[X1, 0, ...]`
//!    and expanding along it extracts `X1`.
//! 6. `A^(8)`: repeat steps 3-4 on the remainder, which is then the family
//!    matrix in `X2..Xm`.

use crate::families::{power_derivative_matrix, shifted_power_derivative_matrix};
use crate::matrix::ElementaryOp;
use crate::scalar::{Scalar, ScalarRing};

use super::{require_generic, Recorder, Reduction, ReductionError, TraceOptions};

/// Rows `first..first+count` are first-block rows over `xs[1..]`, rows
/// `deriv..deriv+count` their derivative partners. Factors `x - pivot` out
/// of each first-block row, clears the `x^j` term of each partner, and
/// factors `x - pivot` out of the partner.
fn normalize_pairs<R: Scalar>(
    rec: &mut Recorder<R>,
    step_factor: &str,
    step_clear: &str,
    step_refactor: &str,
    xs: &[R],
    first: usize,
    deriv: usize,
) -> Result<(), ReductionError> {
    let pivot = &xs[0];
    for (i, x) in xs[1..].iter().enumerate() {
        rec.apply(
            step_factor,
            ElementaryOp::FactorOutRow {
                row: first + i,
                factor: x.clone() - pivot,
            },
        )?;
    }
    for (i, x) in xs[1..].iter().enumerate() {
        rec.apply(
            step_clear,
            ElementaryOp::AddScaledRow {
                src: first + i,
                dst: deriv + i,
                scale: -x.clone(),
            },
        )?;
    }
    for (i, x) in xs[1..].iter().enumerate() {
        rec.apply(
            step_refactor,
            ElementaryOp::FactorOutRow {
                row: deriv + i,
                factor: x.clone() - pivot,
            },
        )?;
    }
    Ok(())
}

/// Drives the recorder's current matrix, assumed to be
/// `power_derivative_matrix(xs)`, down to 0x0.
fn power_derivative_steps<R: Scalar>(rec: &mut Recorder<R>, xs: &[R]) -> Result<(), ReductionError> {
    for level in 0..xs.len() {
        let xs = &xs[level..];
        let m = xs.len();
        let pivot = &xs[0];
        rec.set_context(format!("m={m} pivot X{}", level + 1));

        rec.sweep_columns("A^(1)", pivot)?;
        rec.apply("A^(1)", ElementaryOp::DeleteRowCol { row: 0, col: 0 })?;
        // rows: first block of X2..Xm, the pivot's derivative row, derivative rows of X2..Xm
        if m > 1 {
            rec.apply("A^(2)", ElementaryOp::MoveRow { from: m - 1, to: 0 })?;
        }
        for (i, x) in xs[1..].iter().enumerate() {
            rec.apply(
                "A^(3)",
                ElementaryOp::FactorOutRow {
                    row: 1 + i,
                    factor: x.clone() - pivot,
                },
            )?;
        }
        for (i, x) in xs[1..].iter().enumerate() {
            rec.apply(
                "A^(4)",
                ElementaryOp::AddScaledRow {
                    src: 1 + i,
                    dst: m + i,
                    scale: -x.clone(),
                },
            )?;
        }
        for (i, x) in xs[1..].iter().enumerate() {
            rec.apply(
                "A^(5)",
                ElementaryOp::FactorOutRow {
                    row: m + i,
                    factor: x.clone() - pivot,
                },
            )?;
        }
        rec.sweep_columns("A^(6)", pivot)?;
        rec.apply("A^(7)", ElementaryOp::DeleteRowCol { row: 0, col: 0 })?;
        normalize_pairs(rec, "A^(8)", "A^(8)", "A^(8)", xs, 0, m - 1)?;
    }
    Ok(())
}

/// Reduces the `2m x 2m` power-derivative matrix at `xs` to 0x0.
///
/// The certificate total is `(-1)^(m(m-1)/2) * prod X_i * prod_{i<j} (X_j - X_i)^4`.
/// `xs` must be pairwise distinct and nonzero.
pub fn reduce_power_derivative<R: Scalar>(
    ring: &R::Ring,
    xs: &[R],
    options: TraceOptions,
) -> Result<Reduction<R>, ReductionError> {
    require_generic(xs)?;
    let mut rec = Recorder::new(power_derivative_matrix(ring, xs), options);
    power_derivative_steps(&mut rec, xs)?;
    Ok(rec.finish())
}

/// Reduces the shifted matrix `[X_i^(j+1); (j+1) X_i^j]`: factor `X_i^2` from
/// each first-block row and `X_i` from each derivative row, subtract the
/// first-block row from its partner, then continue as the power-derivative
/// engine.
pub fn reduce_shifted<R: Scalar>(
    ring: &R::Ring,
    xs: &[R],
    options: TraceOptions,
) -> Result<Reduction<R>, ReductionError> {
    require_generic(xs)?;
    let m = xs.len();
    let mut rec = Recorder::new(shifted_power_derivative_matrix(ring, xs), options);
    rec.set_context(format!("m={m} shifted"));
    for (i, x) in xs.iter().enumerate() {
        rec.apply(
            "A^(1)",
            ElementaryOp::FactorOutRow {
                row: i,
                factor: x.clone() * x,
            },
        )?;
    }
    for (i, x) in xs.iter().enumerate() {
        rec.apply(
            "A^(1)",
            ElementaryOp::FactorOutRow {
                row: m + i,
                factor: x.clone(),
            },
        )?;
    }
    for i in 0..m {
        rec.apply(
            "A^(2)",
            ElementaryOp::AddScaledRow {
                src: i,
                dst: m + i,
                scale: -ring.one(),
            },
        )?;
    }
    debug_assert_eq!(rec.current(), &power_derivative_matrix(ring, xs));
    power_derivative_steps(&mut rec, xs)?;
    Ok(rec.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rational, Rational};
    use crate::families::ClosedForm;
    use crate::multipoly::{MultiPoly, PolyRing};
    use crate::scalar::RationalField;
    use crate::FamilyKind;

    fn sym(m: usize) -> (PolyRing, Vec<MultiPoly>) {
        let ring = PolyRing::new(m);
        let xs = ring.vars();
        (ring, xs)
    }

    fn nums(vals: &[i64]) -> Vec<Rational> {
        vals.iter().map(|&v| rational(v, 1)).collect()
    }

    #[test]
    fn base_case_extracts_x1() {
        let (ring, xs) = sym(1);
        let red = reduce_power_derivative(&ring, &xs, TraceOptions::default()).unwrap();
        let cert = &red.certificate;
        assert_eq!(cert.sign(), 1);
        assert_eq!(cert.factors.len(), 1);
        assert_eq!(cert.factors[0].value, xs[0]);
        assert_eq!(cert.residual.shape(), (0, 0));
    }

    #[test]
    fn numeric_m2_total() {
        let red = reduce_power_derivative(&RationalField, &nums(&[1, 2]), TraceOptions::default()).unwrap();
        assert_eq!(red.total(), rational(-2, 1));
        assert!(red.check().unwrap());
    }

    #[test]
    fn symbolic_totals_match_closed_form() {
        for m in 1..=3 {
            let (ring, xs) = sym(m);
            let red = reduce_power_derivative(&ring, &xs, TraceOptions::default()).unwrap();
            let expected = ClosedForm::for_kind(FamilyKind::PowerDerivative, m, 0).evaluate(&ring, &xs);
            assert_eq!(red.total(), expected, "m={m}");
            assert_eq!(red.check_prefixes().unwrap(), Ok(red.trace.stages.len()));
        }
        let (ring, xs) = sym(2);
        let red = reduce_power_derivative(&ring, &xs, TraceOptions::default()).unwrap();
        assert_eq!(red.total().to_string(), (-(xs[0].clone() * &xs[1]) * (xs[1].clone() - &xs[0]).pow(4)).to_string());
    }

    #[test]
    fn first_sweep_exposes_unit_row() {
        // column sweep on the m=2 matrix leaves (1, 0, 0, 0) on top
        let (ring, xs) = sym(2);
        let red = reduce_power_derivative(&ring, &xs, TraceOptions { full_snapshots: true }).unwrap();
        let after_sweep = red.trace.stages[2].snapshot.as_ref().unwrap();
        assert_eq!(after_sweep.shape(), (4, 4));
        assert!(after_sweep.row(0)[0].is_one_elem());
        assert!(after_sweep.row(0)[1..].iter().all(|e| e.is_zero_elem()));
        assert_eq!(red.trace.stages[3].op, "expand along row 1, delete col 1");
    }

    #[test]
    fn sign_comes_from_row_moves_only() {
        for m in 1..=4 {
            let xs: Vec<Rational> = (1..=m as i64).map(|v| rational(v + 1, 1)).collect();
            let red = reduce_power_derivative(&RationalField, &xs, TraceOptions::default()).unwrap();
            let moves = red.trace.stages.iter().filter(|s| s.sign_delta.is_some()).count();
            assert_eq!(red.certificate.sign(), if moves % 2 == 1 { -1 } else { 1 });
            let expected_negative = (m * (m - 1) / 2) % 2 == 1;
            assert_eq!(red.certificate.negative, expected_negative, "m={m}");
        }
    }

    #[test]
    fn shifted_examples() {
        let (ring, xs) = sym(1);
        let red = reduce_shifted(&ring, &xs, TraceOptions::default()).unwrap();
        assert_eq!(red.total(), xs[0].pow(4));
        let red = reduce_shifted(&RationalField, &nums(&[3]), TraceOptions::default()).unwrap();
        assert_eq!(red.total(), rational(81, 1));
        assert_eq!(red.original.to_string(), "[[9, 27], [6, 27]]");
        assert_eq!(red.original.det_cofactor().unwrap(), rational(81, 1));
        let (ring, xs) = sym(2);
        let red = reduce_shifted(&ring, &xs, TraceOptions::default()).unwrap();
        let expected = -(xs[0].pow(4) * xs[1].pow(4) * (xs[1].clone() - &xs[0]).pow(4));
        assert_eq!(red.total(), expected);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(matches!(
            reduce_power_derivative(&RationalField, &nums(&[2, 2]), TraceOptions::default()),
            Err(ReductionError::Degenerate(_))
        ));
        assert!(matches!(
            reduce_shifted(&RationalField, &nums(&[0, 1]), TraceOptions::default()),
            Err(ReductionError::Degenerate(_))
        ));
    }
}

//! Reduction of the binomial Pascal matrix `A[i][j] = C(n + j, i)`.
//!
//! `col[j] -= col[j-1]` right to left turns the first row into
//! `[1, 0, ..., 0]` and every other entry into `C(n + j - 1, i - 1)`, so
//! expanding along that row leaves the same family with one size less.

use num_traits::One;

use crate::families::pascal_matrix;
use crate::matrix::ElementaryOp;
use crate::scalar::IntegerRing;
use crate::Integer;

use super::{Recorder, Reduction, ReductionError, TraceOptions};

pub fn reduce_pascal(n: usize, m: usize, options: TraceOptions) -> Result<Reduction<Integer>, ReductionError> {
    if m < 1 || m > n {
        return Err(ReductionError::Parameter(format!("requires 1 ≤ m ≤ n (got n = {n}, m = {m})")));
    }
    let mut rec = Recorder::new(pascal_matrix(&IntegerRing, n, m), options);
    let one = Integer::one();
    for size in (1..=m).rev() {
        rec.set_context(format!("n={n} m={size}"));
        rec.sweep_columns("A^(1)", &one)?;
        rec.apply("A^(2)", ElementaryOp::DeleteRowCol { row: 0, col: 0 })?;
    }
    Ok(rec.finish())
}

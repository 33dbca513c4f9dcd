//! Reductions for the binomial-power block family.
//!
//! Both engines are built from one primitive, [`binomial_block_round`]: sweep
//! columns by the pivot block's variable so that block's first row becomes
//! `[1, 0, ..., 0]`, expand along it, then restore every block to the
//! canonical entry form `C(n + j - 1, k - 1) * x^(j-1)` by factoring `x_pivot`
//! out of the pivot block's rows and `x_b - x_pivot` out of every row of every
//! other block (clearing the leftover `x_b^j` term of row `k` with
//! `x_b` times row `k - 1` first). Each round shrinks the pivot block by one
//! row and leaves the other blocks' row counts unchanged.

use crate::families::binomial_block_matrix;
use crate::matrix::ElementaryOp;
use crate::scalar::Scalar;

use super::{require_generic, Recorder, Reduction, ReductionError, TraceOptions};

/// Variables and row counts of the blocks of a binomial block matrix, top to
/// bottom. A block with zero rows has been fully reduced away.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockLayout<R: Scalar> {
    pub n: usize,
    pub blocks: Vec<(R, usize)>,
}

impl<R: Scalar> BlockLayout<R> {
    pub fn uniform(xs: &[R], n: usize, l: usize) -> Self {
        BlockLayout {
            n,
            blocks: xs.iter().map(|x| (x.clone(), l)).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.blocks.iter().map(|(_, rows)| rows).sum()
    }

    /// First row of block `b`.
    pub fn offset(&self, b: usize) -> usize {
        self.blocks[..b].iter().map(|(_, rows)| rows).sum()
    }

    /// The canonical matrix for this layout.
    pub fn rebuild(&self, ring: &R::Ring) -> crate::Matrix<R> {
        binomial_block_matrix(ring, self.n, &self.blocks)
    }
}

/// One elimination round with block `pivot` as pivot.
///
/// Expects the recorder's current matrix to equal `layout.rebuild()` and
/// leaves it equal to the rebuilt matrix of the updated layout. Returns the
/// factors extracted in this round, in order.
pub(crate) fn binomial_block_round<R: Scalar>(
    rec: &mut Recorder<R>,
    layout: &mut BlockLayout<R>,
    pivot: usize,
    step: &str,
) -> Result<Vec<R>, ReductionError> {
    let (x, rows) = layout
        .blocks
        .get(pivot)
        .cloned()
        .ok_or_else(|| ReductionError::Parameter(format!("no block {pivot}")))?;
    if rows == 0 {
        return Err(ReductionError::Parameter(format!("block {pivot} is already empty")));
    }
    let before = rec.factors.len();
    let offset = layout.offset(pivot);

    rec.sweep_columns(&format!("{step} (1)"), &x)?;
    rec.apply(&format!("{step} (2)"), ElementaryOp::DeleteRowCol { row: offset, col: 0 })?;
    layout.blocks[pivot].1 -= 1;

    let label = format!("{step} (3)");
    for k in 0..layout.blocks[pivot].1 {
        rec.apply(
            &label,
            ElementaryOp::FactorOutRow {
                row: offset + k,
                factor: x.clone(),
            },
        )?;
    }
    for b in 0..layout.blocks.len() {
        if b == pivot {
            continue;
        }
        let (xb, count) = layout.blocks[b].clone();
        let start = layout.offset(b);
        let diff = xb.clone() - &x;
        for k in 0..count {
            if k > 0 {
                rec.apply(
                    &label,
                    ElementaryOp::AddScaledRow {
                        src: start + k - 1,
                        dst: start + k,
                        scale: -xb.clone(),
                    },
                )?;
            }
            rec.apply(
                &label,
                ElementaryOp::FactorOutRow {
                    row: start + k,
                    factor: diff.clone(),
                },
            )?;
        }
    }
    Ok(rec.factors[before..].iter().map(|f| f.value.clone()).collect())
}

/// Induction on the block count: run `l` rounds on the first block until it
/// disappears, then recurse on the remaining blocks. Per pivot `X_p` this
/// extracts `X_p^(l(l-1)/2) * prod_{i>p} (X_i - X_p)^(l^2)` with no sign.
pub fn reduce_binomial_induction_m<R: Scalar>(
    ring: &R::Ring,
    xs: &[R],
    n: usize,
    l: usize,
    options: TraceOptions,
) -> Result<Reduction<R>, ReductionError> {
    check_params(xs, n, l)?;
    let mut layout = BlockLayout::uniform(xs, n, l);
    let mut rec = Recorder::new(layout.rebuild(ring), options);
    let m = xs.len();
    for p in 0..m {
        for round in 1..=l {
            rec.set_context(format!("m={} pivot X{} round {round}/{l}", m - p, p + 1));
            binomial_block_round(&mut rec, &mut layout, p, &format!("A^<{round}>"))?;
        }
    }
    Ok(rec.finish())
}

/// Induction on the block height: each pass takes one round per variable
/// `j = 1..m`, removing one row from every block and leaving the family
/// with `l - 1`. Round `j` of a pass with height `h` extracts
/// `(-1)^((j-1)(h-1)) * X_j^(h-1) * prod_{i<j} (X_i - X_j)^(h-1) * prod_{i>j} (X_i - X_j)^h`,
/// the sign coming from the position of block `j`'s first row.
pub fn reduce_binomial_induction_l<R: Scalar>(
    ring: &R::Ring,
    xs: &[R],
    n: usize,
    l: usize,
    options: TraceOptions,
) -> Result<Reduction<R>, ReductionError> {
    check_params(xs, n, l)?;
    let mut layout = BlockLayout::uniform(xs, n, l);
    let mut rec = Recorder::new(layout.rebuild(ring), options);
    for height in (1..=l).rev() {
        for j in 0..xs.len() {
            rec.set_context(format!("l={height} pivot X{}", j + 1));
            binomial_block_round(&mut rec, &mut layout, j, &format!("A^<{}>", j + 1))?;
        }
    }
    Ok(rec.finish())
}

fn check_params<R: Scalar>(xs: &[R], n: usize, l: usize) -> Result<(), ReductionError> {
    if l < 1 || n < l {
        return Err(ReductionError::Parameter(format!("requires n ≥ l ≥ 1 (got n = {n}, l = {l})")));
    }
    require_generic(xs)
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

    #[test]
    fn single_round_on_one_block() {
        let (ring, xs) = sym(1);
        let mut layout = BlockLayout::uniform(&xs, 2, 2);
        let mut rec = Recorder::new(layout.rebuild(&ring), TraceOptions::default());
        assert_eq!(rec.current().to_string(), "[[1, X1], [2, 3*X1]]");
        let factors = binomial_block_round(&mut rec, &mut layout, 0, "A^<1>").unwrap();
        assert_eq!(factors, vec![xs[0].clone()]);
        assert_eq!(rec.current().to_string(), "[[1]]");
        assert_eq!(rec.current(), &layout.rebuild(&ring));
    }

    #[test]
    fn single_round_vandermonde() {
        let (ring, xs) = sym(2);
        let mut layout = BlockLayout::uniform(&xs, 1, 1);
        let mut rec = Recorder::new(layout.rebuild(&ring), TraceOptions::default());
        let factors = binomial_block_round(&mut rec, &mut layout, 0, "A^<1>").unwrap();
        assert_eq!(factors, vec![xs[1].clone() - &xs[0]]);
        assert_eq!(rec.current().to_string(), "[[1]]");
    }

    #[test]
    fn rounds_preserve_canonical_form() {
        let (ring, xs) = sym(3);
        for pivots in [vec![0, 0, 1, 2, 1], vec![2, 0, 1, 2, 0]] {
            let mut layout = BlockLayout::uniform(&xs, 3, 2);
            let mut rec = Recorder::new(layout.rebuild(&ring), TraceOptions::default());
            for p in pivots {
                binomial_block_round(&mut rec, &mut layout, p, "A^<r>").unwrap();
                assert_eq!(rec.current(), &layout.rebuild(&ring));
            }
        }
    }

    #[test]
    fn empty_block_is_rejected() {
        let (ring, xs) = sym(2);
        let mut layout = BlockLayout::uniform(&xs, 1, 1);
        let mut rec = Recorder::new(layout.rebuild(&ring), TraceOptions::default());
        binomial_block_round(&mut rec, &mut layout, 0, "r").unwrap();
        assert!(matches!(
            binomial_block_round(&mut rec, &mut layout, 0, "r"),
            Err(ReductionError::Parameter(_))
        ));
    }

    #[test]
    fn per_pivot_factor_bookkeeping() {
        // l rounds on the first block give X1^(l(l-1)/2) * prod (X_i - X1)^(l^2)
        let (ring, xs) = sym(3);
        let l = 3;
        let mut layout = BlockLayout::uniform(&xs, 4, l);
        let mut rec = Recorder::new(layout.rebuild(&ring), TraceOptions::default());
        let mut extracted = Vec::new();
        for _ in 0..l {
            extracted.extend(binomial_block_round(&mut rec, &mut layout, 0, "r").unwrap());
        }
        let got = crate::scalar::product(&ring, extracted);
        let lsq = (l * l) as u32;
        let expected = xs[0].pow((l * (l - 1) / 2) as u32)
            * (xs[1].clone() - &xs[0]).pow(lsq)
            * (xs[2].clone() - &xs[0]).pow(lsq);
        assert_eq!(got, expected);
        assert!(!rec.negative);
        assert_eq!(rec.current(), &BlockLayout::uniform(&xs[1..], 4, l).rebuild(&ring));
    }

    #[test]
    fn row_engine_round_sign() {
        // pass with height h: round j contributes (-1)^((j-1)(h-1))
        let xs: Vec<Rational> = [2, 3, 5].iter().map(|&v| rational(v, 1)).collect();
        let l = 2;
        let mut layout = BlockLayout::uniform(&xs, 2, l);
        let mut rec = Recorder::new(layout.rebuild(&RationalField), TraceOptions::default());
        let mut negative = false;
        for j in 0..3 {
            binomial_block_round(&mut rec, &mut layout, j, "r").unwrap();
            negative ^= (j * (l - 1)) % 2 == 1;
            assert_eq!(rec.negative, negative, "round {}", j + 1);
        }
    }

    #[test]
    fn engines_reach_closed_form() {
        let (ring, xs) = sym(2);
        let expected = xs[0].clone() * &xs[1] * (xs[1].clone() - &xs[0]).pow(4);
        let by_row = reduce_binomial_induction_l(&ring, &xs, 2, 2, TraceOptions::default()).unwrap();
        assert_eq!(by_row.total(), expected);
        assert!(by_row.check().unwrap());
        let by_block = reduce_binomial_induction_m(&ring, &xs, 2, 2, TraceOptions::default()).unwrap();
        assert_eq!(by_block.total(), expected);
        assert_ne!(
            by_row.certificate.factors.iter().map(|f| f.value.clone()).collect::<Vec<_>>(),
            by_block.certificate.factors.iter().map(|f| f.value.clone()).collect::<Vec<_>>()
        );

        let (ring, xs) = sym(1);
        for l in 1..=3 {
            let red = reduce_binomial_induction_m(&ring, &xs, l, l, TraceOptions::default()).unwrap();
            assert_eq!(red.total(), xs[0].pow((l * (l - 1) / 2) as u32));
        }

        let (ring, xs) = sym(2);
        let red = reduce_binomial_induction_l(&ring, &xs, 1, 1, TraceOptions::default()).unwrap();
        assert_eq!(red.certificate.sign(), 1);
        assert_eq!(red.total(), xs[1].clone() - &xs[0]);
    }

    #[test]
    fn symbolic_grid_matches_closed_form() {
        for m in 1..=3usize {
            for l in 1..=(6 / m) {
                let (ring, xs) = sym(m);
                let expected = ClosedForm::for_kind(FamilyKind::BinomialPower, m, l).evaluate(&ring, &xs);
                for n in [l, l + 1] {
                    let a = reduce_binomial_induction_m(&ring, &xs, n, l, TraceOptions::default()).unwrap();
                    let b = reduce_binomial_induction_l(&ring, &xs, n, l, TraceOptions::default()).unwrap();
                    assert_eq!(a.total(), expected, "m={m} n={n} l={l}");
                    assert_eq!(b.total(), expected, "m={m} n={n} l={l}");
                    assert_eq!(a.certificate.residual.shape(), (0, 0));
                }
            }
        }
    }

    #[test]
    fn parameter_checks() {
        let xs = [rational(1, 1), rational(2, 1)];
        assert!(matches!(
            reduce_binomial_induction_m(&RationalField, &xs, 1, 2, TraceOptions::default()),
            Err(ReductionError::Parameter(_))
        ));
        assert!(matches!(
            reduce_binomial_induction_l(&RationalField, &[rational(1, 1), rational(1, 1)], 2, 2, TraceOptions::default()),
            Err(ReductionError::Degenerate(_))
        ));
    }
}

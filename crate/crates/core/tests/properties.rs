use detident_core::arith::rational;
use detident_core::families::{
    binomial_power_matrix, build, closed_form_det, power_derivative_matrix, shifted_power_derivative_matrix,
    vandermonde_matrix, vandermonde_product,
};
use detident_core::random::{random_assignment, random_degenerate_assignment, random_int_matrix, random_rat_matrix, seeded_rng};
use detident_core::reduction::check_certificate;
use detident_core::{
    run_engine, AnyMatrix, AnyScalar, Assignment, ElementaryOp, Engine, FamilySpec, IntMatrix, Integer, Matrix,
    PolyRing, RatMatrix, Rational, RationalField, TraceOptions,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| rational(p, q))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn rat_matrix(n: usize) -> impl Strategy<Value = RatMatrix> {
    proptest::collection::vec(small_rational(), n * n)
        .prop_map(move |entries| Matrix::new(RationalField, n, n, entries).unwrap())
}

fn square_matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..=5).prop_flat_map(rat_matrix)
}

fn distinct_nonzero(count: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(small_rational(), count).prop_filter("generic position", |xs| {
        xs.iter().all(|x| !x.is_zero()) && (0..xs.len()).all(|i| !xs[..i].contains(&xs[i]))
    })
}

#[derive(Debug, Clone)]
enum OpSpec {
    AddRow(usize, usize, Rational),
    AddCol(usize, usize, Rational),
    FactorRow(usize, Rational),
    FactorCol(usize, Rational),
    Swap(usize, usize),
    Move(usize, usize),
}

fn op_spec() -> impl Strategy<Value = OpSpec> {
    let idx = 0usize..16;
    prop_oneof![
        (idx.clone(), idx.clone(), small_rational()).prop_map(|(a, b, s)| OpSpec::AddRow(a, b, s)),
        (idx.clone(), idx.clone(), small_rational()).prop_map(|(a, b, s)| OpSpec::AddCol(a, b, s)),
        (idx.clone(), nonzero_rational()).prop_map(|(a, f)| OpSpec::FactorRow(a, f)),
        (idx.clone(), nonzero_rational()).prop_map(|(a, f)| OpSpec::FactorCol(a, f)),
        (idx.clone(), idx.clone()).prop_map(|(a, b)| OpSpec::Swap(a, b)),
        (idx.clone(), idx).prop_map(|(a, b)| OpSpec::Move(a, b)),
    ]
}

/// Maps indices into range; returns `None` for ops that need two distinct
/// indices on a 1x1 matrix.
fn concrete(spec: &OpSpec, n: usize) -> Option<ElementaryOp<Rational>> {
    let pair = |a: usize, b: usize| -> Option<(usize, usize)> {
        let (a, b) = (a % n, b % n);
        if a == b {
            if n == 1 {
                return None;
            }
            return Some((a, (a + 1) % n));
        }
        Some((a, b))
    };
    Some(match spec.clone() {
        OpSpec::AddRow(a, b, scale) => {
            let (src, dst) = pair(a, b)?;
            ElementaryOp::AddScaledRow { src, dst, scale }
        }
        OpSpec::AddCol(a, b, scale) => {
            let (src, dst) = pair(a, b)?;
            ElementaryOp::AddScaledColumn { src, dst, scale }
        }
        OpSpec::FactorRow(a, factor) => ElementaryOp::FactorOutRow { row: a % n, factor },
        OpSpec::FactorCol(a, factor) => ElementaryOp::FactorOutColumn { col: a % n, factor },
        OpSpec::Swap(a, b) => {
            let (a, b) = pair(a, b)?;
            ElementaryOp::SwapRows { a, b }
        }
        OpSpec::Move(a, b) => ElementaryOp::MoveRow { from: a % n, to: b % n },
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracles_agree(m in square_matrix()) {
        prop_assert_eq!(m.det_bareiss().unwrap(), m.det_cofactor().unwrap());
    }

    #[test]
    fn transpose_invariance(m in square_matrix()) {
        prop_assert_eq!(m.transpose().det_bareiss().unwrap(), m.det_bareiss().unwrap());
    }

    #[test]
    fn swapping_rows_negates(m in (2usize..=5).prop_flat_map(rat_matrix), a in 0usize..5, b in 0usize..5) {
        let n = m.rows();
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        let (swapped, mult) = m.apply(&ElementaryOp::SwapRows { a, b }).unwrap();
        prop_assert!(mult.negate);
        prop_assert_eq!(swapped.det_bareiss().unwrap(), -m.det_bareiss().unwrap());
    }

    #[test]
    fn op_sequences_track_determinant(
        m in square_matrix(),
        ops in proptest::collection::vec(op_spec(), 0..12),
    ) {
        let n = m.rows();
        let mut current = m.clone();
        let mut acc = Rational::one();
        for spec in &ops {
            let Some(op) = concrete(spec, n) else { continue };
            let (next, mult) = current.apply(&op).unwrap();
            acc *= mult.value(&RationalField);
            current = next;
        }
        prop_assert_eq!(m.det_bareiss().unwrap(), acc * current.det_bareiss().unwrap());
    }

    #[test]
    fn power_derivative_numeric_identity(xs in (1usize..=4).prop_flat_map(distinct_nonzero)) {
        let spec = FamilySpec::power_derivative(xs.len(), Assignment::Numeric(xs));
        let AnyMatrix::Rat(a) = build(&spec).unwrap() else { unreachable!() };
        prop_assert_eq!(AnyScalar::Rat(a.det_bareiss().unwrap()), closed_form_det(&spec).unwrap());
    }

    #[test]
    fn shifted_is_cube_multiple(xs in (1usize..=4).prop_flat_map(distinct_nonzero)) {
        let plain = power_derivative_matrix(&RationalField, &xs).det_bareiss().unwrap();
        let shifted = shifted_power_derivative_matrix(&RationalField, &xs).det_bareiss().unwrap();
        let cubes = xs.iter().fold(Rational::one(), |acc, x| acc * x.pow(3));
        prop_assert_eq!(shifted, cubes * plain);
    }

    #[test]
    fn binomial_power_numeric_identity(
        (xs, l, extra) in (1usize..=3, 1usize..=3, 0usize..=2)
            .prop_flat_map(|(m, l, extra)| (distinct_nonzero(m), Just(l), Just(extra)))
    ) {
        let spec = FamilySpec::binomial_power(xs.len(), l + extra, l, Assignment::Numeric(xs));
        let AnyMatrix::Rat(a) = build(&spec).unwrap() else { unreachable!() };
        prop_assert_eq!(AnyScalar::Rat(a.det_bareiss().unwrap()), closed_form_det(&spec).unwrap());
    }

    #[test]
    fn engines_certify_random_points(xs in (1usize..=3).prop_flat_map(distinct_nonzero), l in 1usize..=2) {
        let m = xs.len();
        let specs = [
            FamilySpec::power_derivative(m, Assignment::Numeric(xs.clone())),
            FamilySpec::shifted(m, Assignment::Numeric(xs.clone())),
            FamilySpec::binomial_power(m, l + 1, l, Assignment::Numeric(xs.clone())),
        ];
        for spec in specs {
            for engine in Engine::for_family(spec.kind) {
                let red = run_engine(engine, &spec, TraceOptions::default()).unwrap();
                prop_assert!(red.check().unwrap());
                prop_assert_eq!(red.total(), closed_form_det(&spec).unwrap());
            }
        }
    }

    #[test]
    fn swapping_variables(xs in (2usize..=3).prop_flat_map(distinct_nonzero), l in 1usize..=3) {
        // power-derivative determinant is symmetric; binomial blocks of height l
        // pick up (-1)^(l*l) per adjacent swap
        let mut ys = xs.clone();
        ys.swap(0, 1);
        let pd = |v: &[Rational]| power_derivative_matrix(&RationalField, v).det_bareiss().unwrap();
        prop_assert_eq!(pd(&xs), pd(&ys));
        let bp = |v: &[Rational]| binomial_power_matrix(&RationalField, v, l, l).det_bareiss().unwrap();
        let expected = if l % 2 == 1 { -bp(&xs) } else { bp(&xs) };
        prop_assert_eq!(bp(&ys), expected);
    }
}

#[test]
fn seeded_oracle_agreement() {
    let mut rng = seeded_rng(7);
    for i in 0..200 {
        let m: IntMatrix = random_int_matrix(&mut rng, 1 + i % 5, -9, 9);
        assert_eq!(m.det_bareiss().unwrap(), m.det_cofactor().unwrap(), "{m}");
    }
    for i in 0..40 {
        let m: RatMatrix = random_rat_matrix(&mut rng, 1 + i % 5);
        assert_eq!(m.det_bareiss().unwrap(), m.det_cofactor().unwrap(), "{m}");
    }
}

#[test]
fn degenerate_assignments_vanish() {
    let mut rng = seeded_rng(11);
    for m in 2..=4 {
        let xs = random_degenerate_assignment(&mut rng, m);
        for spec in [
            FamilySpec::power_derivative(m, Assignment::Numeric(xs.clone())),
            FamilySpec::shifted(m, Assignment::Numeric(xs.clone())),
            FamilySpec::binomial_power(m, 2, 2, Assignment::Numeric(xs.clone())),
        ] {
            let AnyMatrix::Rat(a) = build(&spec).unwrap() else { unreachable!() };
            assert!(a.det_bareiss().unwrap().is_zero(), "{spec}");
            assert!(closed_form_det(&spec).unwrap().is_zero(), "{spec}");
            for engine in Engine::for_family(spec.kind) {
                assert!(run_engine(engine, &spec, TraceOptions::default()).is_err());
            }
        }
        let mut zeroed = random_assignment(&mut rng, m, true);
        zeroed[m - 1] = Rational::zero();
        for spec in [
            FamilySpec::power_derivative(m, Assignment::Numeric(zeroed.clone())),
            FamilySpec::shifted(m, Assignment::Numeric(zeroed.clone())),
        ] {
            let AnyMatrix::Rat(a) = build(&spec).unwrap() else { unreachable!() };
            assert!(a.det_bareiss().unwrap().is_zero(), "{spec}");
            assert!(closed_form_det(&spec).unwrap().is_zero(), "{spec}");
        }
    }
}

#[test]
fn single_row_blocks_are_vandermonde() {
    let ring = PolyRing::new(4);
    let xs = ring.vars();
    for n in 1..=3 {
        let a = binomial_power_matrix(&ring, &xs, n, 1);
        assert_eq!(a, vandermonde_matrix(&ring, &xs));
        let spec = FamilySpec::binomial_power(4, n, 1, Assignment::Symbolic);
        assert_eq!(closed_form_det(&spec).unwrap(), AnyScalar::Poly(vandermonde_product(&ring, &xs)));
    }
    assert_eq!(vandermonde_matrix(&ring, &xs).det_bareiss().unwrap(), vandermonde_product(&ring, &xs));
}

#[test]
fn certificate_rejects_wrong_original() {
    let spec = FamilySpec::pascal(5, 4);
    let AnyMatrix::Int(original) = build(&spec).unwrap() else { unreachable!() };
    let detident_core::AnyReduction::Int(red) = run_engine(Engine::Pascal, &spec, TraceOptions::default()).unwrap() else {
        unreachable!()
    };
    assert!(check_certificate(&red.certificate, &original).unwrap());
    let other = Matrix::from_fn(*original.ring(), 4, 4, |i, j| {
        if i == j {
            Integer::from(2)
        } else {
            Integer::zero()
        }
    });
    assert!(!check_certificate(&red.certificate, &other).unwrap());
}

//! Seeded sampling of test points and random matrices.
//!
//! All randomness flows from a caller-supplied seed through ChaCha8, so a
//! given seed reproduces the same values on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{rational, Integer, Rational};
use crate::matrix::Matrix;
use crate::scalar::{IntegerRing, RationalField};

pub type DetRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `p` in `[-50, 50] \ {0}` and `q` in `[1, 10]`.
pub fn random_point_value(rng: &mut impl Rng) -> Rational {
    let p = loop {
        let p: i64 = rng.gen_range(-50..=50);
        if p != 0 {
            break p;
        }
    };
    rational(p, rng.gen_range(1..=10))
}

/// `count` values from [`random_point_value`]; with `distinct`, rejection
/// sampling makes them pairwise different.
pub fn random_assignment(rng: &mut impl Rng, count: usize, distinct: bool) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    while out.len() < count {
        let v = random_point_value(rng);
        if distinct && out.contains(&v) {
            continue;
        }
        out.push(v);
    }
    out
}

/// A random assignment in which two coordinates coincide (needs `count >= 2`).
pub fn random_degenerate_assignment(rng: &mut impl Rng, count: usize) -> Vec<Rational> {
    assert!(count >= 2, "a repeated value needs at least two coordinates");
    let mut out = random_assignment(rng, count, true);
    let mut idx: Vec<usize> = (0..count).collect();
    idx.shuffle(rng);
    out[idx[1]] = out[idx[0]].clone();
    out
}

pub fn random_int_matrix(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> Matrix<Integer> {
    Matrix::from_fn(IntegerRing, n, n, |_, _| Integer::from(rng.gen_range(lo..=hi)))
}

pub fn random_rat_matrix(rng: &mut impl Rng, n: usize) -> Matrix<Rational> {
    Matrix::from_fn(RationalField, n, n, |_, _| {
        let p: i64 = rng.gen_range(-20..=20);
        rational(p, rng.gen_range(1..=9))
    })
}

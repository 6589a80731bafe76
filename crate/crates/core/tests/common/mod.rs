#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use robust_orbits::exactlinalg::{GaussianRational, IntMatrix, Matrix};

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub fn int_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-bound..=bound, rows * cols)
        .prop_map(move |v| Matrix::from_fn(rows, cols, |i, j| BigInt::from(v[i * cols + j])))
}

/// `p/q` with `|p/q| <= bound` and `q <= max_den`.
pub fn rational(bound: i64, max_den: i64) -> impl Strategy<Value = BigRational> {
    (1..=max_den).prop_flat_map(move |q| (-bound * q..=bound * q).prop_map(move |p| rat(p, q)))
}

pub fn rat_vec(n: usize, bound: i64, max_den: i64) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(rational(bound, max_den), n)
}

pub fn nonzero_gaussian() -> impl Strategy<Value = GaussianRational> {
    (rational(3, 4), rational(3, 4))
        .prop_filter("nonzero", |(a, b)| a != &BigRational::from_integer(0.into()) || b != &rat(0, 1))
        .prop_map(|(a, b)| GaussianRational::new(a, b))
}

pub fn gaussian_vec(n: usize) -> impl Strategy<Value = Vec<GaussianRational>> {
    prop::collection::vec(nonzero_gaussian(), n)
}

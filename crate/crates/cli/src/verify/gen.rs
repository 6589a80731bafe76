//! Random instance generators for the acceptance suite.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robust_orbits::exactlinalg::linalg::{det_int, rank};
use robust_orbits::exactlinalg::matrix::{to_rat, IntMatrix, IntVector, Matrix, RatVector};
use robust_orbits::exactlinalg::GaussianRational;
use robust_orbits::lattices::SldpInstance;

pub fn rng(criterion: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x0b17_0000 + criterion as u64)
}

pub fn int_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    Matrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
}

pub fn nonsingular(rng: &mut impl Rng, m: usize, bound: i64) -> IntMatrix {
    loop {
        let g = int_matrix(rng, m, m, bound);
        if !det_int(&g).expect("square").is_zero() {
            return g;
        }
    }
}

/// `p/q` with `|p/q| <= bound` and `1 <= q <= max_den`.
pub fn rational(rng: &mut impl Rng, bound: i64, max_den: i64) -> BigRational {
    let q = rng.gen_range(1..=max_den);
    BigRational::new(rng.gen_range(-bound * q..=bound * q).into(), q.into())
}

pub fn rat_vec(rng: &mut impl Rng, n: usize, bound: i64, max_den: i64) -> RatVector {
    (0..n).map(|_| rational(rng, bound, max_den)).collect()
}

/// Point of `[0, 1)` with denominator at most `max_den`.
pub fn unit_fraction(rng: &mut impl Rng, max_den: i64) -> BigRational {
    let q = rng.gen_range(1..=max_den);
    BigRational::new(rng.gen_range(0..q).into(), q.into())
}

/// `k < n` independent integer vectors with entries in `[-3, 3]`.
pub fn subspace(rng: &mut impl Rng, n: usize, k: usize) -> Vec<IntVector> {
    loop {
        let u = int_matrix(rng, k, n, 3);
        if k == 0 || rank(&to_rat(&u)) == k {
            return u.to_rows();
        }
    }
}

/// SLDP instance in dimension `n` with a random subspace of dimension below `n`.
pub fn sldp_instance(rng: &mut impl Rng, n: usize) -> SldpInstance {
    let k = rng.gen_range(0..n);
    let u = subspace(rng, n, k);
    let t = (0..n).map(|_| rational(rng, 2, 12)).collect();
    SldpInstance::new(t, u).expect("independent generators")
}

/// Gaussian rational of modulus one, from a Pythagorean pair and a random quarter turn.
pub fn unit_gaussian(rng: &mut impl Rng) -> GaussianRational {
    let (a, b) = loop {
        let (a, b): (i64, i64) = (rng.gen_range(0..=8), rng.gen_range(0..=8));
        if a != 0 || b != 0 {
            break (a, b);
        }
    };
    let den = a * a + b * b;
    let z = GaussianRational::new(
        BigRational::new((a * a - b * b).into(), den.into()),
        BigRational::new((2 * a * b).into(), den.into()),
    );
    let quarter = match rng.gen_range(0..4) {
        0 => GaussianRational::from_ints(1, 0),
        1 => GaussianRational::from_ints(0, 1),
        2 => GaussianRational::from_ints(-1, 0),
        _ => GaussianRational::from_ints(0, -1),
    };
    &z * &quarter
}

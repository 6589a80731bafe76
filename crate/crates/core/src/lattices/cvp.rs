//! Closest-vector search in basis coordinates: Babai's nearest plane and an exact
//! Fincke–Pohst enumeration seeded with the Babai radius.

use std::cell::Cell;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::lll::{gram_schmidt_gram, lll_gram};
use crate::error::{Error, Result};
use crate::exactlinalg::linalg::inverse;
use crate::exactlinalg::matrix::{round_half_up, to_rat, IntMatrix, IntVector, RatMatrix, RatVector};
use crate::exactlinalg::numeric::sqrt_upper;

/// Environment variable overriding the enumeration dimension guard.
pub const MAX_ENUM_DIM_ENV: &str = "ROBUST_ORBITS_MAX_ENUM_DIM";
pub const DEFAULT_MAX_ENUM_DIM: usize = 8;

thread_local! {
    static GUARD_OVERRIDE: Cell<Option<usize>> = const { Cell::new(None) };
}

/// Enumeration guard: a scoped override from [`with_max_enum_dim`], else the
/// environment variable if set and valid, else the default.
pub fn max_enum_dim() -> usize {
    if let Some(d) = GUARD_OVERRIDE.with(Cell::get) {
        return d;
    }
    std::env::var(MAX_ENUM_DIM_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ENUM_DIM)
}

/// Runs `f` with the enumeration guard set to `dim` on the current thread.
pub fn with_max_enum_dim<R>(dim: usize, f: impl FnOnce() -> R) -> R {
    struct Restore(Option<usize>);
    impl Drop for Restore {
        fn drop(&mut self) {
            GUARD_OVERRIDE.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(GUARD_OVERRIDE.with(|c| c.replace(Some(dim))));
    f()
}

/// `(y - z)^T q (y - z)`.
pub fn quad_dist(q: &RatMatrix, y: &[BigRational], z: &[BigInt]) -> BigRational {
    let diff: RatVector = y.iter().zip(z).map(|(a, b)| a - BigRational::from_integer(b.clone())).collect();
    let qd = q.mul_vec(&diff).expect("matching dimensions");
    diff.iter().zip(&qd).map(|(a, b)| a * b).sum()
}

/// Centre of coordinate `j` given the already fixed coordinates `z[j+1..]`.
fn centre(mu: &[Vec<BigRational>], y: &[BigRational], z: &[BigInt], j: usize) -> BigRational {
    let mut c = y[j].clone();
    for i in j + 1..y.len() {
        c += &mu[i][j] * (&y[i] - BigRational::from_integer(z[i].clone()));
    }
    c
}

/// Babai's nearest plane in the basis described by `q`, target coordinates `y`.
pub fn babai_gram(q: &RatMatrix, y: &[BigRational]) -> Result<(IntVector, BigRational)> {
    let k = q.rows();
    let (mu, _) = gram_schmidt_gram(q)?;
    let mut z = vec![BigInt::zero(); k];
    for j in (0..k).rev() {
        let c = centre(&mu, y, &z, j);
        z[j] = round_half_up(&c);
    }
    let d = quad_dist(q, y, &z);
    Ok((z, d))
}

/// Transforms target coordinates into the basis `T B`: `y' = T^{-T} y`.
fn to_reduced_coords(t: &IntMatrix, y: &[BigRational]) -> Result<RatVector> {
    let tinv_t = inverse(&to_rat(t))?.transpose();
    tinv_t.mul_vec(y)
}

/// LLL followed by Babai. Returns coordinates in the input basis and the squared distance.
pub fn babai_reduced(q: &RatMatrix, y: &[BigRational]) -> Result<(IntVector, BigRational)> {
    if q.rows() == 0 {
        return Ok((Vec::new(), BigRational::zero()));
    }
    let (t, qr) = lll_gram(q)?;
    let yr = to_reduced_coords(&t, y)?;
    let (zr, d) = babai_gram(&qr, &yr)?;
    let z = t.transpose().mul_vec(&zr)?;
    Ok((z, d))
}

struct Enum<'a> {
    mu: &'a [Vec<BigRational>],
    bstar: &'a [BigRational],
    y: &'a [BigRational],
    best: BigRational,
    found: Vec<IntVector>,
}

impl Enum<'_> {
    fn search(&mut self, j: usize, z: &mut IntVector, partial: &BigRational) {
        let c = centre(self.mu, self.y, z, j);
        let rem = &self.best - partial;
        if rem.is_negative() {
            return;
        }
        let s = sqrt_upper(&(&rem / &self.bstar[j]), 16);
        let lo = (&c - &s).ceil().to_integer();
        let hi = (&c + &s).floor().to_integer();
        let mut v = lo;
        while v <= hi {
            let diff = &c - BigRational::from_integer(v.clone());
            let total = partial + &self.bstar[j] * &diff * &diff;
            if total <= self.best {
                z[j] = v.clone();
                if j == 0 {
                    if total < self.best {
                        self.best = total;
                        self.found.clear();
                    }
                    self.found.push(z.clone());
                } else {
                    self.search(j - 1, z, &total);
                }
            }
            v += 1;
        }
        z[j] = BigInt::zero();
    }
}

/// Every lattice point at minimal distance from the target, in input coordinates,
/// sorted lexicographically, together with the exact squared distance.
pub fn closest_all_gram(q: &RatMatrix, y: &[BigRational], max_dim: usize) -> Result<(Vec<IntVector>, BigRational)> {
    let k = q.rows();
    if k > max_dim {
        return Err(Error::DimensionGuard { dim: k, max: max_dim });
    }
    if k == 0 {
        return Ok((vec![Vec::new()], BigRational::zero()));
    }
    let (t, qr) = lll_gram(q)?;
    let yr = to_reduced_coords(&t, y)?;
    let (_, seed) = babai_gram(&qr, &yr)?;
    let (mu, bstar) = gram_schmidt_gram(&qr)?;
    let mut e = Enum {
        mu: &mu,
        bstar: &bstar,
        y: &yr,
        best: seed,
        found: Vec::new(),
    };
    let mut z = vec![BigInt::zero(); k];
    e.search(k - 1, &mut z, &BigRational::zero());
    let tt = t.transpose();
    let mut pts: Vec<IntVector> = e
        .found
        .iter()
        .map(|zr| tt.mul_vec(zr))
        .collect::<Result<_>>()?;
    pts.sort();
    pts.dedup();
    Ok((pts, e.best))
}

/// Lexicographically smallest closest point (input coordinates) and squared distance.
pub fn closest_gram(q: &RatMatrix, y: &[BigRational], max_dim: usize) -> Result<(IntVector, BigRational)> {
    let (mut pts, d) = closest_all_gram(q, y, max_dim)?;
    Ok((pts.swap_remove(0), d))
}

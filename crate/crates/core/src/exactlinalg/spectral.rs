//! Certified bounds on singular values of integer matrices.
//!
//! Eigenvalues of the symmetric matrix `H H^T` are located exactly: the number of
//! eigenvalues below `x` equals the number of negative entries in a congruence
//! diagonalisation of `H H^T - x I`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::linalg::rank_int;
use super::matrix::{max_abs, to_rat, IntMatrix, Matrix, RatMatrix};
use super::numeric::{pow2, sqrt_lower, sqrt_upper, SQRT_BITS};
use crate::error::{Error, Result};

/// Inertia `(positive, negative, zero)` of a symmetric rational matrix.
pub fn inertia(a: &RatMatrix) -> (usize, usize, usize) {
    let mut m = a.clone();
    let mut n = m.rows();
    let (mut pos, mut neg) = (0, 0);
    while n > 0 {
        // Bring a nonzero diagonal entry to position 0 of the trailing block.
        let base = m.rows() - n;
        let diag = (base..m.rows()).find(|&i| !m[(i, i)].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                let off = (base..m.rows())
                    .flat_map(|i| (base..m.rows()).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && !m[(i, j)].is_zero());
                let Some((i, j)) = off else { break };
                // Replace x_i by x_i + x_j: the new diagonal entry is 2 a_ij.
                for k in 0..m.cols() {
                    let v = &m[(i, k)] + &m[(j, k)];
                    m[(i, k)] = v;
                }
                for k in 0..m.rows() {
                    let v = &m[(k, i)] + &m[(k, j)];
                    m[(k, i)] = v;
                }
                i
            }
        };
        m.swap_rows(base, p);
        m.swap_cols(base, p);
        let piv = m[(base, base)].clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in base + 1..m.rows() {
            if m[(i, base)].is_zero() {
                continue;
            }
            let f = &m[(i, base)] / &piv;
            for j in base..m.cols() {
                let v = &m[(i, j)] - &f * &m[(base, j)];
                m[(i, j)] = v;
            }
        }
        for i in base + 1..m.rows() {
            m[(base, i)] = BigRational::zero();
        }
        n -= 1;
    }
    (pos, neg, n)
}

/// Number of eigenvalues of the symmetric matrix `a` strictly below `x`.
pub fn eigen_count_below(a: &RatMatrix, x: &BigRational) -> usize {
    let shifted = Matrix::from_fn(a.rows(), a.cols(), |i, j| {
        if i == j {
            &a[(i, j)] - x
        } else {
            a[(i, j)].clone()
        }
    });
    inertia(&shifted).1
}

/// Bracket `[lo, hi]` around the `idx`-th smallest eigenvalue (0-based) of a symmetric
/// positive definite matrix, with `hi - lo <= rel * lo`.
pub fn eigen_bracket(a: &RatMatrix, idx: usize, rel: &BigRational) -> (BigRational, BigRational) {
    assert!(idx < a.rows());
    // Dyadic bracket: largest e with count_below(2^e) <= idx.
    let below = |x: &BigRational| eigen_count_below(a, x);
    let mut e: i64 = 0;
    if below(&pow2(0)) <= idx {
        while below(&pow2(e + 1)) <= idx {
            e += 1;
        }
    } else {
        while below(&pow2(e)) > idx {
            e -= 1;
        }
    }
    let (mut lo, mut hi) = (pow2(e), pow2(e + 1));
    // Invariant: count_below(lo) <= idx < count_below(hi), so lo <= lambda_idx < hi.
    while &hi - &lo > rel * &lo {
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        if below(&mid) <= idx {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Gram matrix `H H^T` over the rationals.
pub fn gram(h: &IntMatrix) -> RatMatrix {
    to_rat(&h.gram_rows())
}

fn require_full_row_rank(h: &IntMatrix) -> Result<()> {
    let r = rank_int(h);
    if r != h.rows() || h.rows() > h.cols() {
        return Err(Error::RankDeficient {
            rank: r,
            expected: h.rows(),
        });
    }
    Ok(())
}

/// Coarse a priori bounds `lo <= sigma_min(H)` and `sigma_max(H) <= hi` from the
/// entry size alone: `hi = n |H|_max` and `lo = hi^-(n-1)`.
pub fn sigma_bounds(h: &IntMatrix) -> Result<(BigRational, BigRational)> {
    require_full_row_rank(h)?;
    let n = h.cols();
    let hi = BigRational::from_integer(BigInt::from(n) * max_abs(h));
    let lo = hi.recip().pow(n as i32 - 1);
    Ok((lo, hi))
}

/// Rational `D` with `sigma_min(H) <= D <= 2 sigma_min(H)`.
///
/// The smallest eigenvalue of `H H^T` is bracketed within a factor 2, then the
/// upper end is inflated by `(9/8)^2` and a directed square root is taken.
pub fn sigma_min_2approx(h: &IntMatrix) -> Result<BigRational> {
    require_full_row_rank(h)?;
    if h.rows() == 0 {
        return Err(Error::Precondition("matrix has no rows".into()));
    }
    let (_, b) = eigen_bracket(&gram(h), 0, &BigRational::one());
    let inflated = b * BigRational::new(81.into(), 64.into());
    Ok(sqrt_upper(&inflated, 8))
}

/// Brackets for the extreme singular values of `H`, tight to relative width `rel`:
/// `(smin_lo, smin_hi, smax_lo, smax_hi)`.
pub fn singular_brackets(
    h: &IntMatrix,
    rel: &BigRational,
) -> Result<(BigRational, BigRational, BigRational, BigRational)> {
    require_full_row_rank(h)?;
    let g = gram(h);
    let k = g.rows();
    let (a0, b0) = eigen_bracket(&g, 0, rel);
    let (a1, b1) = eigen_bracket(&g, k - 1, rel);
    Ok((
        sqrt_lower(&a0, SQRT_BITS),
        sqrt_upper(&b0, SQRT_BITS),
        sqrt_lower(&a1, SQRT_BITS),
        sqrt_upper(&b1, SQRT_BITS),
    ))
}

/// Characteristic polynomial `det(xI - A)`, coefficients from the constant term up.
pub fn charpoly(a: &RatMatrix) -> Vec<BigRational> {
    let n = a.rows();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m: RatMatrix = Matrix::zeros(n, n);
    let id: RatMatrix = Matrix::identity(n);
    for k in 1..=n {
        let c_prev = coeffs[n - k + 1].clone();
        m = &(a * &m) + &id.scale(&c_prev);
        let am = a * &m;
        let tr: BigRational = (0..n).map(|i| am[(i, i)].clone()).sum();
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    coeffs
}

pub fn poly_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn poly_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        p.push(BigRational::zero());
    }
    p
}

fn is_zero_poly(p: &[BigRational]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut r = poly_trim(a.to_vec());
    while !is_zero_poly(&r) && r.len() > db {
        let dr = r.len() - 1;
        let f = &r[dr] / &lead;
        for (i, bi) in b.iter().enumerate() {
            let v = &r[dr - db + i] - &f * bi;
            r[dr - db + i] = v;
        }
        r.pop();
        r = poly_trim(r);
    }
    r
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

/// Number of distinct real roots of `p` in the half-open interval `(a, b]`, by Sturm's theorem.
pub fn sturm_count(p: &[BigRational], a: &BigRational, b: &BigRational) -> usize {
    let mut seq = vec![poly_trim(p.to_vec())];
    let mut next = poly_trim(derivative(&seq[0]));
    while !is_zero_poly(&next) {
        let prev = seq.last().expect("nonempty").clone();
        seq.push(next.clone());
        let r = poly_rem(&prev, &next);
        next = r.into_iter().map(|c| -c).collect();
        next = poly_trim(next);
    }
    let changes = |x: &BigRational| {
        let signs: Vec<bool> = seq
            .iter()
            .map(|q| poly_eval(q, x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    changes(a).saturating_sub(changes(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::matrix::{int_matrix, rat};

    #[test]
    fn bounds_examples() {
        assert_eq!(sigma_bounds(&int_matrix(&[&[1, 1]])).unwrap(), (rat(1, 2), rat(2, 1)));
        assert_eq!(sigma_bounds(&Matrix::identity(2)).unwrap(), (rat(1, 2), rat(2, 1)));
        assert_eq!(sigma_bounds(&int_matrix(&[&[3, 4]])).unwrap(), (rat(1, 8), rat(8, 1)));
    }

    #[test]
    fn rank_deficient_rejected() {
        let h = int_matrix(&[&[1, 2], &[2, 4]]);
        assert!(matches!(sigma_bounds(&h), Err(Error::RankDeficient { .. })));
        assert!(sigma_min_2approx(&h).is_err());
    }

    fn check_2approx(h: &IntMatrix) {
        let d = sigma_min_2approx(h).unwrap();
        let g = gram(h);
        let d2 = &d * &d;
        // sigma <= D  iff  no eigenvalue of HH^T exceeds... lambda_min <= D^2
        assert!(eigen_count_below(&g, &d2) >= 1 || poly_eval(&charpoly(&g), &d2).is_zero());
        // D <= 2 sigma  iff  D^2/4 <= lambda_min
        assert_eq!(eigen_count_below(&g, &(&d2 / rat(4, 1))), 0);
        // The same facts through the characteristic polynomial.
        let p = charpoly(&g);
        let below = rat(0, 1);
        assert_eq!(sturm_count(&p, &below, &(&d2 / rat(4, 1))), 0);
        assert!(sturm_count(&p, &below, &d2) >= 1);
    }

    #[test]
    fn two_approx_examples() {
        check_2approx(&Matrix::identity(3));
        check_2approx(&int_matrix(&[&[1, 1]]));
        check_2approx(&int_matrix(&[&[1, 0], &[100, 1]]));
        check_2approx(&int_matrix(&[&[3, 1, 4, 1], &[5, 9, 2, 6]]));
    }

    #[test]
    fn charpoly_of_skewed() {
        let g = gram(&int_matrix(&[&[1, 0], &[100, 1]]));
        assert_eq!(charpoly(&g), vec![rat(1, 1), rat(-10002, 1), rat(1, 1)]);
    }

    #[test]
    fn inertia_with_zero_diagonal() {
        let a = crate::exactlinalg::matrix::rat_matrix(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]);
        assert_eq!(inertia(&a), (1, 1, 0));
        let z: RatMatrix = Matrix::zeros(2, 2);
        assert_eq!(inertia(&z), (0, 0, 2));
    }

    #[test]
    fn tight_brackets() {
        let (lo, hi, _, _) = singular_brackets(&int_matrix(&[&[3, 4]]), &rat(1, 1000)).unwrap();
        assert!(lo <= rat(5, 1) && hi >= rat(5, 1));
        assert!(hi - lo < rat(1, 100));
    }
}

//! Criteria on sums of squares of integers and of rational linear forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use robust_orbits::exactlinalg::matrix::{to_rat, Matrix, RatMatrix};
use robust_orbits::lifting::{sum_of_squares, waring_decompose_detailed};

use super::{core_err, ensure, gen};

/// Least `k >= 0` with `d <= 2^(2^k)`.
fn loglog(d: &BigInt) -> u64 {
    if *d <= BigInt::from(2) {
        return 0;
    }
    // d <= 2^(2^k) iff d - 1 fits in 2^k bits.
    let bits = (d - 1u8).bits();
    let mut k = 0;
    while (1u64 << k) < bits {
        k += 1;
    }
    k
}

fn check_sos(d: u64, longest: &mut usize) -> Result<(), String> {
    let big = BigInt::from(d);
    let terms = sum_of_squares(&big).map_err(core_err)?;
    let total: BigInt = terms.iter().map(|a| a * a).sum();
    ensure(total == big, || format!("D = {d}: the squares sum to {total}"))?;
    let bound = loglog(&big) + 4;
    ensure(terms.len() as u64 <= bound, || format!("D = {d}: {} terms exceed {bound}", terms.len()))?;
    *longest = (*longest).max(terms.len());
    Ok(())
}

pub fn sums_of_squares() -> Result<String, String> {
    let mut longest = 0;
    for d in 0..=1_000_000u64 {
        check_sos(d, &mut longest)?;
    }
    let mut rng = gen::rng(9);
    for _ in 0..1_000_000 {
        check_sos(rng.gen_range(1..=1_000_000_000_000_000_000u64), &mut longest)?;
    }
    Ok(format!(
        "every D <= 10^6 and 10^6 random D <= 10^18 decompose exactly within loglog D + 4 terms (longest {longest})"
    ))
}

/// `B^T B / c1 + diag(p) / c2` with positive `p`.
fn positive_definite(rng: &mut impl Rng, m: usize) -> RatMatrix {
    let b = to_rat(&gen::int_matrix(rng, m, m, 5));
    let c1 = BigRational::from_integer(rng.gen_range(1..=9).into());
    let c2 = BigRational::from_integer(rng.gen_range(1..=9).into());
    let btb = &b.transpose() * &b;
    Matrix::from_fn(m, m, |i, j| {
        let mut v = &btb[(i, j)] / &c1;
        if i == j {
            v += BigRational::from_integer(rng.gen_range(1..=20).into()) / &c2;
        }
        v
    })
}

pub fn waring() -> Result<String, String> {
    let mut rng = gen::rng(10);
    let mut most = 0;
    for i in 0..200 {
        let m = 1 + i % 6;
        let a = positive_definite(&mut rng, m);
        let w = waring_decompose_detailed(&a).map_err(core_err)?;
        let mut sum: RatMatrix = Matrix::zeros(m, m);
        for l in &w.vectors {
            ensure(l.len() == m, || format!("matrix {i}: a form has {} coefficients", l.len()))?;
            for r in 0..m {
                for c in 0..m {
                    sum[(r, c)] += &l[r] * &l[c];
                }
            }
        }
        ensure(sum == a, || format!("matrix {i}: sum l l^T != A for A = {a}"))?;
        let dmax = w.scaled_diagonal.iter().max().cloned().unwrap_or_else(BigInt::one);
        ensure(w.scaled_diagonal.iter().all(|d| !d.is_zero()), || format!("matrix {i}: zero pivot"))?;
        let bound = m as u64 * (loglog(&dmax) + 4);
        ensure(w.vectors.len() as u64 <= bound, || {
            format!("matrix {i}: {} forms exceed m (loglog d_max + 4) = {bound}", w.vectors.len())
        })?;
        most = most.max(w.vectors.len());
    }
    Ok(format!("200 positive definite A with m <= 6: sum l l^T = A exactly with at most {most} forms, within m (loglog d + 4)"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loglog_thresholds() {
        let k = |d: u64| loglog(&BigInt::from(d));
        assert_eq!([k(0), k(1), k(2), k(3), k(4), k(5), k(16), k(17)], [0, 0, 0, 1, 1, 2, 2, 3]);
        assert_eq!([k(256), k(257)], [3, 4]);
        assert_eq!([k(65536), k(65537)], [4, 5]);
    }
}

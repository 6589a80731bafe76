//! Rational helpers: directed square roots, powers of two, logarithm bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Default relative accuracy of directed square roots, in bits.
pub const SQRT_BITS: u64 = 64;

pub fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

fn ceil_isqrt(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &(&r * &r) == n {
        r
    } else {
        r + 1
    }
}

/// Returns `Some(r)` with `r*r == x` when `x` is the square of a rational.
pub fn exact_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (p, q) = (x.numer().sqrt(), x.denom().sqrt());
    (&(&p * &p) == x.numer() && &(&q * &q) == x.denom()).then(|| BigRational::new(p, q))
}

/// Rational `r >= sqrt(x)` with `r <= sqrt(x) (1 + 2^-bits)`; exact on perfect squares.
pub fn sqrt_upper(x: &BigRational, bits: u64) -> BigRational {
    assert!(!x.is_negative(), "square root of a negative number");
    if let Some(r) = exact_sqrt(x) {
        return r;
    }
    // sqrt(p/q) = sqrt(p q) / q, scaled by 2^bits.
    let pq = (x.numer() * x.denom()) << (2 * bits as usize);
    BigRational::new(ceil_isqrt(&pq), x.denom() << bits as usize)
}

/// Rational `r <= sqrt(x)` with `r >= sqrt(x) (1 - 2^-bits)`; exact on perfect squares.
pub fn sqrt_lower(x: &BigRational, bits: u64) -> BigRational {
    assert!(!x.is_negative(), "square root of a negative number");
    if let Some(r) = exact_sqrt(x) {
        return r;
    }
    let pq = (x.numer() * x.denom()) << (2 * bits as usize);
    BigRational::new(pq.sqrt(), x.denom() << bits as usize)
}

/// Largest `e` with `2^e <= x` for positive `x`.
pub fn floor_log2(x: &BigRational) -> i64 {
    assert!(x.is_positive());
    let (p, q) = (x.numer(), x.denom());
    let mut e = p.bits() as i64 - q.bits() as i64;
    // Now 2^(e-1) < x < 2^(e+1).
    while pow2(e) > *x {
        e -= 1;
    }
    while pow2(e + 1) <= *x {
        e += 1;
    }
    e
}

/// Smallest `e` with `x <= 2^e` for positive `x`.
pub fn ceil_log2(x: &BigRational) -> i64 {
    let f = floor_log2(x);
    if pow2(f) == *x {
        f
    } else {
        f + 1
    }
}

/// `ceil(log2(log2(d)))` for `d >= 2`; `0` below.
pub fn ceil_log2_log2(d: &BigInt) -> u64 {
    if d <= &BigInt::from(2) {
        return 0;
    }
    // log2 d <= 2^e  iff  d <= 2^(2^e)
    let mut e = 0u64;
    while *d > (BigInt::one() << (1usize << e)) {
        e += 1;
    }
    e
}

/// Rounds `x` outward to a dyadic rational with `bits` fractional bits.
pub fn round_up_dyadic(x: &BigRational, bits: u64) -> BigRational {
    let s = pow2(bits as i64);
    BigRational::new((x * &s).ceil().to_integer(), s.to_integer())
}

pub fn round_down_dyadic(x: &BigRational, bits: u64) -> BigRational {
    let s = pow2(bits as i64);
    BigRational::new((x * &s).floor().to_integer(), s.to_integer())
}

pub fn max_rat<'a>(a: &'a BigRational, b: &'a BigRational) -> &'a BigRational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn min_rat<'a>(a: &'a BigRational, b: &'a BigRational) -> &'a BigRational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn is_nonneg(x: &BigRational) -> bool {
    !x.is_negative() || x.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::matrix::rat;

    #[test]
    fn sqrt_directed() {
        let two = rat(2, 1);
        let u = sqrt_upper(&two, 40);
        let l = sqrt_lower(&two, 40);
        assert!(&u * &u >= two && &l * &l <= two);
        assert!(&u - &l < pow2(-38));
        assert_eq!(sqrt_upper(&rat(9, 4), 10), rat(3, 2));
    }

    #[test]
    fn log2_bounds() {
        assert_eq!(floor_log2(&rat(1, 1)), 0);
        assert_eq!(floor_log2(&rat(3, 1)), 1);
        assert_eq!(floor_log2(&rat(1, 3)), -2);
        assert_eq!(ceil_log2(&rat(1, 3)), -1);
        assert_eq!(ceil_log2(&rat(4, 1)), 2);
    }

    #[test]
    fn double_log() {
        assert_eq!(ceil_log2_log2(&BigInt::from(2)), 0);
        assert_eq!(ceil_log2_log2(&BigInt::from(4)), 1);
        assert_eq!(ceil_log2_log2(&BigInt::from(5)), 2);
        assert_eq!(ceil_log2_log2(&BigInt::from(16)), 2);
        assert_eq!(ceil_log2_log2(&BigInt::from(17)), 3);
    }
}

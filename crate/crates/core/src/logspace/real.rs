//! Certified real arithmetic: rational intervals with outward rounding, and the
//! elementary functions evaluated by fixed-point Taylor series with explicit
//! error accounting.
//!
//! Every public function returns an enclosure of the true value. Point functions
//! retry at a higher working precision until the enclosure meets the requested
//! width, so the requested accuracy is a postcondition and not an estimate.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactlinalg::numeric::{ceil_log2, floor_log2, pow2, sqrt_lower, sqrt_upper};
use crate::exactlinalg::Certified;

/// Extra working bits on top of the target precision.
const GUARD: u64 = 24;

/// Closed interval `[lo, hi]` of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn round_rel(x: &BigRational, bits: u64, up: bool) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    let shift = bits as i64 - floor_log2(&x.abs());
    let s = pow2(shift);
    let y = x * &s;
    let r = if up { y.ceil() } else { y.floor() };
    r / s
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi, "empty interval");
        Self { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(BigRational::from_integer(n.into()))
    }

    pub fn from_certified(c: &Certified) -> Self {
        Self::new(c.lower(), c.upper())
    }

    pub fn to_certified(&self) -> Certified {
        Certified::from_bounds(&self.lo, &self.hi)
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> BigRational {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn add_rat(&self, x: &BigRational) -> Self {
        Self::new(&self.lo + x, &self.hi + x)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let (a, b) = (&self.lo * s, &self.hi * s);
        if s.is_negative() {
            Self::new(b, a)
        } else {
            Self::new(a, b)
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().expect("nonempty").clone();
        let hi = c.iter().max().expect("nonempty").clone();
        Self::new(lo, hi)
    }

    pub fn sqr(&self) -> Self {
        let (a, b) = (&self.lo * &self.lo, &self.hi * &self.hi);
        if self.lo.is_negative() && self.hi.is_positive() {
            Self::new(BigRational::zero(), a.max(b))
        } else if a <= b {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }

    /// `1 / x` for an interval not containing zero.
    pub fn recip(&self) -> Self {
        assert!(self.lo.is_positive() || self.hi.is_negative(), "interval contains zero");
        Self::new(self.hi.recip(), self.lo.recip())
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    /// Square root of the nonnegative part, rounded outward at `bits` relative bits.
    pub fn sqrt(&self, bits: u64) -> Self {
        let z = BigRational::zero();
        let lo = if self.lo.is_positive() { sqrt_lower(&self.lo, bits) } else { z.clone() };
        let hi = if self.hi.is_positive() { sqrt_upper(&self.hi, bits) } else { z };
        Self::new(lo, hi)
    }

    /// Rounds the endpoints outward to `bits` significant bits, keeping sizes bounded.
    pub fn round(&self, bits: u64) -> Self {
        Self::new(round_rel(&self.lo, bits, false), round_rel(&self.hi, bits, true))
    }

    pub fn hull(&self, o: &Self) -> Self {
        Self::new(self.lo.clone().min(o.lo.clone()), self.hi.clone().max(o.hi.clone()))
    }
}

/// Smallest `bits` with `2^-bits <= eps`, for `eps > 0`.
pub fn bits_for(eps: &BigRational) -> u64 {
    assert!(eps.is_positive());
    (-floor_log2(eps)).max(1) as u64
}

fn fixed_floor(x: &BigRational, w: u64) -> BigInt {
    (x * pow2(w as i64)).floor().to_integer()
}

fn fixed_ceil(x: &BigRational, w: u64) -> BigInt {
    (x * pow2(w as i64)).ceil().to_integer()
}

fn unfixed(m: BigInt, w: u64) -> BigRational {
    BigRational::new(m, BigInt::one() << w as usize)
}

/// Fixed-point value `s / 2^w` with an error bound of `err` units.
fn fixed_interval(s: BigInt, err: u64, w: u64) -> Interval {
    let e = BigInt::from(err);
    Interval::new(unfixed(&s - &e, w), unfixed(s + e, w))
}

// Series kernels. The argument is exactly `x / 2^w`; each returns the partial sum
// and a bound on its distance to the full series, in units of `2^-w`. Every term
// is computed with at most three truncations from the previous one, and the
// contraction factor of the recurrence is at most 1/2, so per-term errors stay
// below 6 units; the tail after the first vanishing term is at most 12 units.

fn series_err(terms: u64) -> u64 {
    6 * terms + 20
}

/// `exp(x)` for `|x| <= 1/2`.
fn exp_kernel(x: &BigInt, w: u64) -> (BigInt, u64) {
    let one = BigInt::one() << w as usize;
    let mut t = one.clone();
    let mut s = one;
    let mut k = 1u64;
    loop {
        t = ((&t * x) >> w as usize) / BigInt::from(k);
        if t.is_zero() {
            break;
        }
        s += &t;
        k += 1;
    }
    (s, series_err(k))
}

/// `atanh(x)` (`sign = 1`) or `atan(x)` (`sign = -1`) for `|x| <= 1/3`.
fn arctan_kernel(x: &BigInt, w: u64, sign: i64) -> (BigInt, u64) {
    let x2 = (x * x) >> w as usize;
    let mut p = x.clone();
    let mut s = x.clone();
    let mut j = 1u64;
    loop {
        p = (&p * &x2) >> w as usize;
        if sign < 0 {
            p = -p;
        }
        let term = &p / BigInt::from(2 * j + 1);
        if p.is_zero() {
            break;
        }
        s += term;
        j += 1;
    }
    (s, series_err(j))
}

/// `(cos x, sin x)` for `|x| <= 4/5`.
fn cos_sin_kernel(x: &BigInt, w: u64) -> ((BigInt, u64), (BigInt, u64)) {
    let x2 = (x * x) >> w as usize;
    let one = BigInt::one() << w as usize;
    let (mut c, mut sc) = (one.clone(), one);
    let (mut s, mut ss) = (x.clone(), x.clone());
    let mut k = 1u64;
    loop {
        c = -(((&c * &x2) >> w as usize) / BigInt::from((2 * k - 1) * (2 * k)));
        s = -(((&s * &x2) >> w as usize) / BigInt::from((2 * k) * (2 * k + 1)));
        if c.is_zero() && s.is_zero() {
            break;
        }
        sc += &c;
        ss += &s;
        k += 1;
    }
    ((sc, series_err(k)), (ss, series_err(k)))
}

/// Enclosure of `exp(x)` for rational `|x| <= 1/2`.
fn exp_small(x: &BigRational, w: u64) -> Interval {
    let (lo, elo) = exp_kernel(&fixed_floor(x, w), w);
    let (hi, ehi) = exp_kernel(&fixed_ceil(x, w), w);
    Interval::new(fixed_interval(lo, elo, w).lo, fixed_interval(hi, ehi, w).hi)
}

/// Enclosure of `atanh(x)` for rational `|x| <= 1/3`.
fn atanh_small(x: &BigRational, w: u64) -> Interval {
    let (lo, elo) = arctan_kernel(&fixed_floor(x, w), w, 1);
    let (hi, ehi) = arctan_kernel(&fixed_ceil(x, w), w, 1);
    Interval::new(fixed_interval(lo, elo, w).lo, fixed_interval(hi, ehi, w).hi)
}

/// Enclosure of `atan` over an interval inside `[-1/3, 1/3]`.
fn atan_small(x: &Interval, w: u64) -> Interval {
    let (lo, elo) = arctan_kernel(&fixed_floor(&x.lo, w), w, -1);
    let (hi, ehi) = arctan_kernel(&fixed_ceil(&x.hi, w), w, -1);
    Interval::new(fixed_interval(lo, elo, w).lo, fixed_interval(hi, ehi, w).hi)
}

/// Enclosures of `cos` and `sin` over an interval inside `[-4/5, 4/5]`.
fn cos_sin_small(x: &Interval, w: u64) -> (Interval, Interval) {
    // Both functions are 1-Lipschitz: evaluate at a dyadic centre and widen.
    let m = fixed_floor(&x.mid(), w);
    let centre = unfixed(m.clone(), w);
    let r = (&x.hi - &centre).max(&centre - &x.lo);
    let ((c, ec), (s, es)) = cos_sin_kernel(&m, w);
    let widen = |iv: Interval| Interval::new(&iv.lo - &r, &iv.hi + &r);
    (widen(fixed_interval(c, ec, w)), widen(fixed_interval(s, es, w)))
}

/// Runs `f` at increasing working precision until `ok` accepts its result.
fn refine<T>(bits: u64, mut f: impl FnMut(u64) -> T, ok: impl Fn(&T) -> bool) -> T {
    let mut w = bits + GUARD;
    loop {
        let r = f(w);
        if ok(&r) {
            return r;
        }
        w += w / 2;
    }
}

fn narrow_enough(iv: &Interval, bits: u64) -> bool {
    iv.width() <= pow2(-(bits as i64))
}

// π is memoised at the highest precision computed so far.
static PI_MEMO: RwLock<Option<(u64, Interval)>> = RwLock::new(None);

fn pi_uncached(w: u64) -> Interval {
    // Machin: π = 16 atan(1/5) - 4 atan(1/239).
    let a = atan_small(&Interval::point(BigRational::new(1.into(), 5.into())), w);
    let b = atan_small(&Interval::point(BigRational::new(1.into(), 239.into())), w);
    a.scale(&BigRational::from_integer(16.into()))
        .sub(&b.scale(&BigRational::from_integer(4.into())))
}

/// Enclosure of `π` of width at most `2^-bits`.
pub fn pi(bits: u64) -> Interval {
    if let Some((b, iv)) = PI_MEMO.read().expect("pi memo poisoned").as_ref() {
        if *b >= bits {
            return iv.clone();
        }
    }
    let iv = refine(bits, pi_uncached, |iv| narrow_enough(iv, bits));
    let mut memo = PI_MEMO.write().expect("pi memo poisoned");
    if memo.as_ref().is_none_or(|(b, _)| *b < bits) {
        *memo = Some((bits, iv.clone()));
    }
    iv
}

/// `π` as a certified value with error at most `2^-bits`.
pub fn pi_certified(bits: u64) -> Certified {
    pi(bits).to_certified()
}

/// Enclosure of `ln 2` of width at most `2^-bits`.
pub fn ln2(bits: u64) -> Interval {
    let third = BigRational::new(1.into(), 3.into());
    refine(
        bits,
        |w| atanh_small(&third, w).scale(&BigRational::from_integer(2.into())),
        |iv| narrow_enough(iv, bits),
    )
}

fn exp_at(x: &BigRational, w: u64) -> Interval {
    // exp(x) = exp(x / 2^s)^(2^s) with |x / 2^s| <= 1/2.
    let s = if x.is_zero() { 0 } else { (ceil_log2(&x.abs()) + 1).max(0) as u64 };
    let mut e = exp_small(&(x / pow2(s as i64)), w + s);
    for _ in 0..s {
        e = e.sqr().round(w + s);
    }
    e
}

/// Enclosure of `exp(x)` with relative width at most `2^-bits`; exact at `x = 0`.
pub fn exp(x: &BigRational, bits: u64) -> Interval {
    if x.is_zero() {
        return Interval::from_int(1);
    }
    let tol = pow2(-(bits as i64));
    refine(bits, |w| exp_at(x, w), |iv| iv.width() <= &tol * &iv.lo)
}

/// Enclosure of `ln(x)` of width at most `2^-bits`, for `x > 0`; exact at `x = 1`.
pub fn ln(x: &BigRational, bits: u64) -> Interval {
    assert!(x.is_positive(), "logarithm of a nonpositive number");
    if x.is_one() {
        return Interval::from_int(0);
    }
    // x = 2^k m with m in [1, 2), and ln m = 2 atanh((m - 1) / (m + 1)).
    let k = floor_log2(x);
    let m = x / pow2(k);
    let one = BigRational::one();
    let z = (&m - &one) / (&m + &one);
    let kk = BigRational::from_integer(k.into());
    let extra = 64 - (k.unsigned_abs().max(1)).leading_zeros() as u64;
    refine(
        bits,
        |w| {
            let l2 = atanh_small(&BigRational::new(1.into(), 3.into()), w + extra);
            let lm = atanh_small(&z, w);
            l2.scale(&(&kk * BigRational::from_integer(2.into())))
                .add(&lm.scale(&BigRational::from_integer(2.into())))
        },
        |iv| narrow_enough(iv, bits),
    )
}

/// `atan(q)` for rational `|q| <= 1`, via two half-angle reductions.
fn atan_unit(q: &BigRational, w: u64) -> Interval {
    let one = Interval::from_int(1);
    let mut u = Interval::point(q.clone());
    for _ in 0..2 {
        // atan(u) = 2 atan(u / (1 + sqrt(1 + u^2))).
        let den = one.add(&one.add(&u.sqr()).sqrt(w)).round(w);
        u = u.div(&den).round(w);
    }
    atan_small(&u, w).scale(&BigRational::from_integer(4.into()))
}

/// Argument of `a + b i` in turns, i.e. `arg / (2π)` in `(-1/2, 1/2]`, with width
/// at most `2^-bits`. Exact when the argument is a multiple of `π/4`.
pub fn arg_turns(a: &BigRational, b: &BigRational, bits: u64) -> Interval {
    assert!(!(a.is_zero() && b.is_zero()), "argument of zero");
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    // arg = offset·2π + sign·atan(q), |q| <= 1.
    let (offset, sign, q) = if a.is_positive() && b.abs() <= *a {
        (r(0, 1), 1, b / a)
    } else if b.is_positive() && a.abs() < *b {
        (r(1, 4), -1, a / b)
    } else if b.is_negative() && a.abs() < b.abs() {
        (r(-1, 4), -1, a / b)
    } else if !b.is_negative() {
        (r(1, 2), 1, b / a)
    } else {
        (r(-1, 2), 1, b / a)
    };
    if q.is_zero() {
        return Interval::point(offset);
    }
    if q.abs().is_one() {
        let eighth = r(q.signum().to_integer().try_into().unwrap_or(1i64) * sign, 8);
        return Interval::point(offset + eighth);
    }
    let s = BigRational::from_integer(sign.into());
    refine(
        bits,
        |w| {
            let two_pi = pi(w).scale(&r(2, 1));
            atan_unit(&q, w).div(&two_pi).scale(&s).add_rat(&offset)
        },
        |iv| narrow_enough(iv, bits),
    )
}

/// Enclosures of `cos(2πθ)` and `sin(2πθ)` of width at most `2^-bits`; exact when
/// `4θ` is an integer.
pub fn cos_sin_turns(theta: &BigRational, bits: u64) -> (Interval, Interval) {
    let f = theta - theta.floor();
    let four = BigRational::from_integer(4.into());
    let q = (&f * &four).round().to_integer();
    let delta = &f - BigRational::new(q.clone(), 4.into());
    let quarter = q.mod_floor(&BigInt::from(4)).try_into().unwrap_or(0u8);
    let (c, s) = if delta.is_zero() {
        (Interval::from_int(1), Interval::from_int(0))
    } else {
        refine(
            bits,
            |w| {
                let alpha = pi(w).scale(&(&delta * BigRational::from_integer(2.into())));
                cos_sin_small(&alpha, w)
            },
            |(c, s)| narrow_enough(c, bits) && narrow_enough(s, bits),
        )
    };
    match quarter {
        0 => (c, s),
        1 => (s.neg(), c),
        2 => (c.neg(), s.neg()),
        _ => (s, c.neg()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::matrix::rat;
    use num_traits::ToPrimitive;

    fn close(iv: &Interval, x: f64, tol: f64) -> bool {
        (iv.mid().to_f64().unwrap() - x).abs() <= tol
    }

    #[test]
    fn pi_digits() {
        let p = pi(200);
        // 3.14159265358979323846264338327950288419716939937510
        let lo = BigRational::new(
            "314159265358979323846264338327950288419716939937510".parse().unwrap(),
            BigInt::from(10).pow(50),
        );
        let hi = &lo + BigRational::new(1.into(), BigInt::from(10).pow(50));
        assert!(p.lo < hi && lo < p.hi);
        assert!(narrow_enough(&p, 200));
        assert!(narrow_enough(&pi(100), 100));
    }

    #[test]
    fn exp_and_ln_values() {
        assert_eq!(exp(&rat(0, 1), 50), Interval::from_int(1));
        assert!(close(&exp(&rat(1, 1), 60), std::f64::consts::E, 1e-15));
        assert!(close(&exp(&rat(-37, 3), 60), (-37.0f64 / 3.0).exp(), 1e-18));
        assert!(close(&exp(&rat(40, 1), 60), 40f64.exp(), 40f64.exp() * 1e-15));
        assert_eq!(ln(&rat(1, 1), 50), Interval::from_int(0));
        assert!(close(&ln(&rat(2, 1), 60), std::f64::consts::LN_2, 1e-15));
        assert!(close(&ln(&rat(1, 1000), 60), (0.001f64).ln(), 1e-14));
        assert!(ln(&rat(2, 1), 60).contains(&ln2(80).mid()));
    }

    #[test]
    fn exp_ln_inverse() {
        for x in [rat(3, 7), rat(-5, 2), rat(11, 1), rat(1, 1_000_000)] {
            let e = exp(&x, 100);
            let l = ln(&e.mid(), 100);
            assert!((l.mid() - &x).abs() < pow2(-90), "x = {x}");
        }
    }

    #[test]
    fn arguments() {
        let r = |n, d| rat(n, d);
        assert_eq!(arg_turns(&r(1, 1), &r(0, 1), 50), Interval::point(r(0, 1)));
        assert_eq!(arg_turns(&r(-1, 1), &r(0, 1), 50), Interval::point(r(1, 2)));
        assert_eq!(arg_turns(&r(0, 1), &r(3, 1), 50), Interval::point(r(1, 4)));
        assert_eq!(arg_turns(&r(0, 1), &r(-3, 1), 50), Interval::point(r(-1, 4)));
        assert_eq!(arg_turns(&r(-2, 1), &r(-2, 1), 50), Interval::point(r(-3, 8)));
        assert_eq!(arg_turns(&r(2, 1), &r(-2, 1), 50), Interval::point(r(-1, 8)));
        let tau = std::f64::consts::TAU;
        for (a, b) in [(3, 4), (-3, 4), (-3, -4), (3, -4), (1, 7), (-7, 1)] {
            let want = (b as f64).atan2(a as f64) / tau;
            assert!(close(&arg_turns(&r(a, 1), &r(b, 1), 60), want, 1e-15), "{a} {b}");
        }
    }

    #[test]
    fn cos_sin_values() {
        let (c, s) = cos_sin_turns(&rat(1, 2), 60);
        assert_eq!((c, s), (Interval::from_int(-1), Interval::from_int(0)));
        let (c, s) = cos_sin_turns(&rat(-1, 4), 60);
        assert_eq!((c, s), (Interval::from_int(0), Interval::from_int(-1)));
        let tau = std::f64::consts::TAU;
        for t in [rat(1, 3), rat(7, 10), rat(-2, 7), rat(13, 5)] {
            let x = t.to_f64().unwrap();
            let (c, s) = cos_sin_turns(&t, 60);
            assert!(close(&c, (tau * x).cos(), 1e-14) && close(&s, (tau * x).sin(), 1e-14), "{t}");
            assert!(narrow_enough(&c, 60) && narrow_enough(&s, 60));
        }
    }

    #[test]
    fn interval_ops() {
        let a = Interval::new(rat(-1, 1), rat(2, 1));
        assert_eq!(a.sqr(), Interval::new(rat(0, 1), rat(4, 1)));
        assert_eq!(a.mul(&a.neg()), Interval::new(rat(-4, 1), rat(2, 1)));
        let b = Interval::new(rat(1, 3), rat(1, 2)).round(8);
        assert!(b.contains(&rat(1, 3)) && b.contains(&rat(1, 2)));
        assert_eq!(bits_for(&rat(1, 1024)), 10);
        assert_eq!(bits_for(&rat(1, 1000)), 10);
    }
}

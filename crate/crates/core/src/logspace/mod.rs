//! Certified logarithms and exponentials, the quotient metric `Δ` on
//! `C^n / 2πi Z^n`, and orbit distances in log space.
//!
//! A point `η = ρ + 2πi θ` of the quotient is stored with `θ` reduced to `[0, 1)`,
//! so `dist(θ - φ, Z^n)` is a rounding problem. For a weight matrix `M` with row
//! space `U`,
//!
//! `Δ²(T∗η, T∗ζ) = dist²(ρ - τ, U) + 4π² dist²(θ - φ + U, Z^n)`
//!
//! and for the compact torus the first term is `|ρ - τ|²`.

pub mod real;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::linalg::project_onto_rowspace;
use crate::exactlinalg::matrix::{dist_to_int_sq, norm_sq, to_rat, vec_sub, IntMatrix, RatVector};
use crate::exactlinalg::numeric::{exact_sqrt, pow2, sqrt_lower, sqrt_upper, SQRT_BITS};
use crate::exactlinalg::{Certified, CertifiedComplex, GaussianRational};
use crate::lattices::{sldp, Backend, DistanceEstimate, SldpInstance, SldpWitness};
use crate::torus::{orbit_equal_k, InvariantMatrix, TorusAction};
use real::{arg_turns, bits_for, cos_sin_turns, exp, ln, pi, Interval};

/// Working precision of `Δ` evaluations that take no explicit accuracy.
pub const DEFAULT_BITS: u64 = 128;

/// Point `ρ + 2πi θ` of `C^n / 2πi Z^n`, known up to `err` in the quotient norm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientPoint {
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub rho: RatVector,
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub theta: RatVector,
    #[serde(with = "crate::exactlinalg::json::rat", default = "BigRational::zero")]
    pub err: BigRational,
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl QuotientPoint {
    /// Exact point; `theta` is reduced modulo 1.
    pub fn new(rho: RatVector, theta: RatVector) -> Result<Self> {
        if rho.len() != theta.len() {
            return Err(Error::DimensionMismatch("rho and theta differ in length".into()));
        }
        Ok(Self {
            theta: theta.iter().map(frac).collect(),
            rho,
            err: BigRational::zero(),
        })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            rho: vec![BigRational::zero(); n],
            theta: vec![BigRational::zero(); n],
            err: BigRational::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rho.len()
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_zero()
    }

    /// `η + M^T x` for `x = y + 2πi z`: the log of `e^x · v`.
    pub fn translate(&self, action: &TorusAction, y: &[BigRational], z: &[BigRational]) -> Result<Self> {
        let dy = action.translate(y)?;
        let dz = action.translate(z)?;
        Ok(Self {
            rho: self.rho.iter().zip(&dy).map(|(a, b)| a + b).collect(),
            theta: self.theta.iter().zip(&dz).map(|(a, b)| frac(&(a + b))).collect(),
            err: self.err.clone(),
        })
    }

    /// Image under the integer matrix `h` (well defined on the quotient).
    pub fn map(&self, h: &IntMatrix) -> Result<Self> {
        let hr = to_rat(h);
        Ok(Self {
            rho: hr.mul_vec(&self.rho)?,
            theta: hr.mul_vec(&self.theta)?.iter().map(frac).collect(),
            err: &self.err * op_norm_upper(&hr),
        })
    }
}

/// Upper bound on the spectral norm: the smaller of the Frobenius norm and
/// `sqrt(|H|_1 |H|_inf)`.
fn op_norm_upper(h: &crate::exactlinalg::RatMatrix) -> BigRational {
    let fro: BigRational = h.entries().iter().map(|x| x * x).sum();
    let row = (0..h.rows()).map(|i| h.row(i).iter().map(|x| x.abs()).sum::<BigRational>()).max();
    let col = (0..h.cols()).map(|j| h.col(j).iter().map(|x| x.abs()).sum::<BigRational>()).max();
    let mixed = row.unwrap_or_default() * col.unwrap_or_default();
    sqrt_upper(&fro.min(mixed), SQRT_BITS)
}

fn check_nonzero(v: &[GaussianRational]) -> Result<()> {
    match v.iter().position(Zero::is_zero) {
        Some(i) => Err(Error::ZeroComponent { index: i }),
        None => Ok(()),
    }
}

fn check_eps(eps: &BigRational) -> Result<u64> {
    if !eps.is_positive() {
        return Err(Error::NonPositivePrecision);
    }
    Ok(bits_for(eps))
}

/// Componentwise principal logarithm with `|(ρ + 2πiθ) - Log v| < eps` in the quotient.
/// Exact when every `|v_j| = 1` and every argument is a multiple of `π/4`.
pub fn log_approx(v: &[GaussianRational], eps: &BigRational) -> Result<QuotientPoint> {
    check_nonzero(v)?;
    let n = v.len().max(1) as u64;
    // Each component contributes at most 8 · 2^-bits.
    let bits = check_eps(eps)? + 4 + (64 - n.leading_zeros() as u64);
    let half = BigRational::new(1.into(), 2.into());
    let mut err = BigRational::zero();
    let (mut rho, mut theta) = (Vec::with_capacity(v.len()), Vec::with_capacity(v.len()));
    for x in v {
        let r = ln(&x.norm_sq(), bits).scale(&half);
        let t = arg_turns(&x.re, &x.im, bits);
        err += r.width() / BigRational::from_integer(2.into()) + t.width() * BigRational::from_integer(4.into());
        rho.push(r.mid());
        theta.push(frac(&t.mid()));
    }
    debug_assert!(&err < eps);
    Ok(QuotientPoint { rho, theta, err })
}

/// `Exp(ρ + 2πiθ)` componentwise with relative error below `eps`. The point is
/// taken at its stored value; `p.err` is not propagated.
pub fn exp_approx(p: &QuotientPoint, eps: &BigRational) -> Result<Vec<GaussianRational>> {
    let bits = check_eps(eps)? + 4;
    Ok(p.rho
        .iter()
        .zip(&p.theta)
        .map(|(r, t)| {
            let e = exp(r, bits);
            let (c, s) = cos_sin_turns(t, bits);
            GaussianRational::new(e.mul(&c).mid(), e.mul(&s).mid())
        })
        .collect())
}

/// The two exact ingredients of `Δ(p, q)²`: `|ρ - τ|²` and `dist²(θ - φ, Z^n)`.
pub fn delta_sq_parts(p: &QuotientPoint, q: &QuotientPoint) -> Result<(BigRational, BigRational)> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch("quotient points differ in dimension".into()));
    }
    let real = norm_sq(&vec_sub(&p.rho, &q.rho));
    let imag = p.theta.iter().zip(&q.theta).map(|(a, b)| dist_to_int_sq(&(a - b))).sum();
    Ok((real, imag))
}

/// Enclosure of `sqrt(a + 4π² b)` for exact `a, b >= 0`.
pub fn sqrt_a_plus_pi_b(a: &BigRational, b: &BigRational, bits: u64) -> Interval {
    if b.is_zero() {
        return Interval::new(sqrt_lower(a, bits), sqrt_upper(a, bits));
    }
    let four_pi_sq = pi(bits + 4).sqr().scale(&BigRational::from_integer(4.into()));
    four_pi_sq.scale(b).add_rat(a).sqrt(bits)
}

/// `Δ(p, q) = sqrt(|ρ - τ|² + 4π² dist²(θ - φ, Z^n))`, widened by the points' errors.
pub fn delta_metric_bits(p: &QuotientPoint, q: &QuotientPoint, bits: u64) -> Result<Certified> {
    let (a, b) = delta_sq_parts(p, q)?;
    let iv = sqrt_a_plus_pi_b(&a, &b, bits);
    let e = &p.err + &q.err;
    Ok(Interval::new((&iv.lo - &e).max(BigRational::zero()), &iv.hi + e).to_certified())
}

pub fn delta_metric(p: &QuotientPoint, q: &QuotientPoint) -> Result<Certified> {
    delta_metric_bits(p, q, DEFAULT_BITS)
}

/// Complex torus `T` or compact torus `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    T,
    K,
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(Group::T),
            "K" | "k" => Ok(Group::K),
            other => Err(Error::Parse(format!("unknown group {other:?}"))),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::T => "T",
            Group::K => "K",
        })
    }
}

/// `Δ` between orbits, split into its exact real part and the SLDP part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaOrbit {
    /// `dist²(ρ - τ, U)` for `T`, `|ρ - τ|²` for `K`; exact.
    #[serde(with = "crate::exactlinalg::json::rat")]
    pub real_sq: BigRational,
    /// Estimate of `dist(θ - φ + U, Z^n)`.
    pub imag: DistanceEstimate,
    /// Estimate of the orbit distance itself.
    pub estimate: DistanceEstimate,
    #[serde(skip)]
    pub witness: Option<SldpWitness>,
}

impl DeltaOrbit {
    /// Certified value of the orbit distance when the SLDP part is known exactly.
    pub fn certified(&self, bits: u64) -> Option<Certified> {
        let b = self.imag.squared_exact.as_ref()?;
        Some(sqrt_a_plus_pi_b(&self.real_sq, b, bits).to_certified())
    }
}

/// Relative slack covering the rounding of `π` and of the final square root.
fn rounding_slack() -> BigRational {
    BigRational::one() + pow2(-60)
}

/// Orbit distance in log space. `p` and `q` are used at their stored values.
pub fn delta_orbit_detailed(
    action: &TorusAction,
    p: &QuotientPoint,
    q: &QuotientPoint,
    group: Group,
    backend: Backend,
    max_dim: usize,
) -> Result<DeltaOrbit> {
    let n = action.n();
    if p.dim() != n || q.dim() != n {
        return Err(Error::DimensionMismatch("quotient points do not match the action".into()));
    }
    let diff = vec_sub(&p.rho, &q.rho);
    let u_basis = action.u_basis();
    let real_sq = match group {
        Group::K => norm_sq(&diff),
        Group::T => {
            let u = to_rat(action.matrix());
            let proj = project_onto_rowspace(&u, &diff)?;
            norm_sq(&vec_sub(&diff, &proj))
        }
    };
    let t: RatVector = p.theta.iter().zip(&q.theta).map(|(a, b)| a - b).collect();
    let (imag, witness) = sldp(&SldpInstance::new(t, u_basis)?, backend, max_dim)?;
    let estimate = if imag.d.is_zero() {
        DistanceEstimate {
            d: sqrt_upper(&real_sq, SQRT_BITS),
            gamma: if exact_sqrt(&real_sq).is_some() { BigRational::one() } else { rounding_slack() },
            squared_exact: Some(real_sq.clone()),
        }
    } else {
        let bits = DEFAULT_BITS;
        let pi_hi = pi(bits).hi;
        let four = BigRational::from_integer(4.into());
        let sq = &real_sq + four * &pi_hi * &pi_hi * &imag.d * &imag.d;
        DistanceEstimate {
            d: sqrt_upper(&sq, SQRT_BITS),
            gamma: &imag.gamma * rounding_slack(),
            squared_exact: None,
        }
    };
    Ok(DeltaOrbit {
        real_sq,
        imag,
        estimate,
        witness: Some(witness),
    })
}

pub fn delta_orbit(
    action: &TorusAction,
    p: &QuotientPoint,
    q: &QuotientPoint,
    group: Group,
    backend: Backend,
) -> Result<DistanceEstimate> {
    Ok(delta_orbit_detailed(action, p, q, group, backend, crate::lattices::max_enum_dim())?.estimate)
}

/// `Δ(Hη, Hζ)` in `C^k / 2πi Z^k`.
pub fn h_distance(h: &InvariantMatrix, p: &QuotientPoint, q: &QuotientPoint) -> Result<Certified> {
    delta_metric(&p.map(&h.h)?, &q.map(&h.h)?)
}

/// Certified bounds `lower <= dist(C_v, C_w) <= upper` for compact-torus orbits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDistBounds {
    pub lower: Certified,
    pub upper: Certified,
    /// `Δ(K∗Log v, K∗Log w)` estimate the bounds were derived from.
    pub delta: DistanceEstimate,
}

/// Sandwich `(2r/π) Δ_K <= dist(C_v, C_w) <= R Δ_K` with `r`, `R` the smallest and
/// largest moduli among the entries of `v` and `w`.
pub fn k_orbit_dist_bounds(
    action: &TorusAction,
    v: &[GaussianRational],
    w: &[GaussianRational],
    backend: Backend,
    bits: u64,
) -> Result<OrbitDistBounds> {
    if orbit_equal_k(action, v, w)? {
        return Ok(OrbitDistBounds {
            lower: Certified::zero(),
            upper: Certified::zero(),
            delta: DistanceEstimate::zero(),
        });
    }
    let eps = pow2(-(bits as i64));
    let p = log_approx(v, &eps)?;
    let q = log_approx(w, &eps)?;
    let est = delta_orbit_detailed(action, &p, &q, Group::K, backend, crate::lattices::max_enum_dim())?.estimate;
    let e = &p.err + &q.err;
    let norms: Vec<BigRational> = v.iter().chain(w).map(GaussianRational::norm_sq).collect();
    let r = sqrt_lower(norms.iter().min().expect("nonempty"), SQRT_BITS);
    let big_r = sqrt_upper(norms.iter().max().expect("nonempty"), SQRT_BITS);
    let delta_lo = (&est.d / &est.gamma - &e).max(BigRational::zero());
    let two = BigRational::from_integer(2.into());
    let lower = two * r * delta_lo / pi(bits).hi;
    let upper = big_r * (&est.d + e);
    Ok(OrbitDistBounds {
        lower: Certified::exact(lower),
        upper: Certified::exact(upper),
        delta: est,
    })
}

/// `Λ(v, e) = Σ e_j Log v_j` with principal logarithms, within `eps` in each part.
pub fn linear_form_in_logs(v: &[GaussianRational], e: &[BigInt], eps: &BigRational) -> Result<CertifiedComplex> {
    if v.len() != e.len() {
        return Err(Error::DimensionMismatch("exponent vector has the wrong length".into()));
    }
    check_nonzero(v)?;
    let weight: BigInt = e.iter().map(|x| x.abs()).sum::<BigInt>() * 8 + 1;
    let bits = check_eps(eps)? + weight.bits() + 2;
    let half = BigRational::new(1.into(), 2.into());
    let two_pi = pi(bits + 4).scale(&BigRational::from_integer(2.into()));
    let (mut re, mut im) = (Interval::from_int(0), Interval::from_int(0));
    for (x, k) in v.iter().zip(e) {
        if k.is_zero() {
            continue;
        }
        let kr = BigRational::from_integer(k.clone());
        re = re.add(&ln(&x.norm_sq(), bits).scale(&(&half * &kr)));
        let t = arg_turns(&x.re, &x.im, bits);
        im = im.add(&t.mul(&two_pi).scale(&kr));
    }
    Ok(CertifiedComplex {
        re: re.to_certified(),
        im: im.to_certified(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::matrix::rat;
    use crate::lattices::sldp_exact;
    use crate::torus::invariant_matrix;
    use num_traits::ToPrimitive;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn to_f(x: &BigRational) -> f64 {
        x.to_f64().unwrap()
    }

    fn action(rows: &[&[i64]]) -> TorusAction {
        TorusAction::from_rows(rows).unwrap()
    }

    #[test]
    fn log_examples() {
        let eps = rat(1, 1 << 30);
        let p = log_approx(&[g(1, 0), g(1, 0)], &eps).unwrap();
        assert_eq!(p, QuotientPoint::zero(2));
        let p = log_approx(&[g(-1, 0)], &eps).unwrap();
        assert_eq!((p.rho[0].clone(), p.theta[0].clone(), p.err.clone()), (rat(0, 1), rat(1, 2), rat(0, 1)));
        let p = log_approx(&[g(2, 0)], &eps).unwrap();
        assert!((to_f(&p.rho[0]) - std::f64::consts::LN_2).abs() < 1e-9);
        assert!(p.err < eps);
        let p = log_approx(&[g(0, -3)], &eps).unwrap();
        assert_eq!(p.theta[0], rat(3, 4));
        assert!(log_approx(&[g(0, 0)], &eps).is_err());
        assert!(log_approx(&[g(1, 0)], &rat(0, 1)).is_err());
    }

    #[test]
    fn exp_examples() {
        let eps = rat(1, 1 << 30);
        assert_eq!(exp_approx(&QuotientPoint::zero(2), &eps).unwrap(), vec![g(1, 0), g(1, 0)]);
        let p = QuotientPoint::new(vec![rat(0, 1)], vec![rat(1, 2)]).unwrap();
        assert_eq!(exp_approx(&p, &eps).unwrap(), vec![g(-1, 0)]);
        let l = log_approx(&[g(2, 0)], &eps).unwrap();
        let v = exp_approx(&l, &eps).unwrap();
        assert!((to_f(&v[0].re) - 2.0).abs() < 1e-8 && v[0].im.abs() < rat(1, 1 << 20));
    }

    #[test]
    fn round_trip() {
        let eps = rat(1, 1 << 40);
        let v = vec![g(3, -4), g(-7, 2), GaussianRational::new(rat(1, 9), rat(-5, 3))];
        let back = exp_approx(&log_approx(&v, &eps).unwrap(), &eps).unwrap();
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b).norm_sq() < a.norm_sq() * rat(1, 1 << 60));
        }
    }

    #[test]
    fn delta_examples() {
        let z = QuotientPoint::zero(1);
        assert_eq!(delta_metric(&z, &z).unwrap(), Certified::zero());
        let q = QuotientPoint::new(vec![rat(0, 1)], vec![rat(3, 4)]).unwrap();
        let d = delta_metric(&z, &q).unwrap();
        assert!((to_f(&d.value) - std::f64::consts::PI / 2.0).abs() < 1e-15);
        assert!(d.err < pow2(-100));
        let p = QuotientPoint::new(vec![rat(1, 1)], vec![rat(0, 1)]).unwrap();
        assert_eq!(delta_metric(&p, &z).unwrap(), Certified::exact(rat(1, 1)));
    }

    #[test]
    fn delta_orbit_examples() {
        let hyper = action(&[&[1, -1]]);
        let eps = rat(1, 1 << 40);
        let p = QuotientPoint::zero(2);
        assert_eq!(delta_orbit(&hyper, &p, &p, Group::T, Backend::Exact).unwrap(), DistanceEstimate::zero());
        let q = log_approx(&[g(2, 0), g(1, 0)], &eps).unwrap();
        let d = delta_orbit(&hyper, &p, &q, Group::T, Backend::Exact).unwrap();
        let want = std::f64::consts::LN_2 / 2f64.sqrt();
        assert!((to_f(&d.d) - want).abs() < 1e-9);

        let lines = action(&[&[1, 1]]);
        let q = QuotientPoint::new(vec![rat(0, 1); 2], vec![rat(1, 2), rat(0, 1)]).unwrap();
        let det = delta_orbit_detailed(&lines, &p, &q, Group::K, Backend::Exact, 8).unwrap();
        let inst = SldpInstance::new(vec![rat(-1, 2), rat(0, 1)], vec![vec![1.into(), 1.into()]]).unwrap();
        assert_eq!(det.imag.squared_exact, Some(sldp_exact(&inst).unwrap()));
        assert_eq!(det.real_sq, rat(0, 1));
        let c = det.certified(100).unwrap();
        let want = 2.0 * std::f64::consts::PI * (0.125f64).sqrt();
        assert!((to_f(&c.value) - want).abs() < 1e-12);
    }

    #[test]
    fn h_distance_examples() {
        let hyper = action(&[&[1, -1]]);
        let h = invariant_matrix(&hyper);
        let eps = rat(1, 1 << 40);
        let p = log_approx(&[g(1, 0), g(1, 0)], &eps).unwrap();
        let q = log_approx(&[g(2, 0), g(1, 0)], &eps).unwrap();
        assert_eq!(h_distance(&h, &p, &p).unwrap(), Certified::zero());
        assert!(h_distance(&h, &p, &q).unwrap().contains(&real::ln(&rat(2, 1), 80).mid()));
        let triv = invariant_matrix(&action(&[&[0, 0]]));
        assert_eq!(h_distance(&triv, &p, &q).unwrap(), delta_metric(&p, &q).unwrap());
    }

    #[test]
    fn k_bounds_examples() {
        let lines = action(&[&[1, 1]]);
        let b = k_orbit_dist_bounds(&lines, &[g(1, 0), g(1, 0)], &[g(1, 0), g(-1, 0)], Backend::Exact, 64).unwrap();
        assert!(b.lower.value <= rat(2, 1) && rat(2, 1) <= b.upper.value);
        let v = [g(3, 4), g(0, 1)];
        let b = k_orbit_dist_bounds(&lines, &v, &v, Backend::Exact, 64).unwrap();
        assert!(b.lower.value.is_zero() && b.upper.value.is_zero());
    }

    #[test]
    fn linear_forms() {
        let eps = rat(1, 1 << 40);
        let z = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let l = linear_form_in_logs(&[g(2, 0), g(4, 0)], &z(&[0, 0]), &eps).unwrap();
        assert!(l.re.is_exact() && l.re.value.is_zero());
        let l = linear_form_in_logs(&[g(2, 0), g(4, 0)], &z(&[2, -1]), &eps).unwrap();
        assert!(l.re.contains(&rat(0, 1)) && l.re.err < eps && l.im.contains(&rat(0, 1)));
        let l = linear_form_in_logs(&[g(2, 0), g(3, 0)], &z(&[1, 1]), &eps).unwrap();
        assert!((to_f(&l.re.value) - 6f64.ln()).abs() < 1e-12 && l.re.err < eps);
        let l = linear_form_in_logs(&[g(-1, 0), g(0, 1)], &z(&[1, 3]), &eps).unwrap();
        let want = std::f64::consts::PI * 2.5;
        assert!((to_f(&l.im.value) - want).abs() < 1e-12);
    }
}

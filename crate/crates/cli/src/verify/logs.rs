//! Criteria on the log-space metric: the linear-forms sandwich, metric
//! equivalence on the unit torus and the orbit-equality deciders.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use robust_orbits::exactlinalg::gaussian::{dist_sq, parse_gaussian};
use robust_orbits::exactlinalg::matrix::int_matrix;
use robust_orbits::exactlinalg::numeric::pow2;
use robust_orbits::exactlinalg::spectral::{sigma_bounds, singular_brackets};
use robust_orbits::exactlinalg::GaussianRational;
use robust_orbits::kempfness::kn_orbit_equal;
use robust_orbits::lattices::Backend;
use robust_orbits::logspace::real::pi;
use robust_orbits::logspace::{
    delta_metric_bits, delta_orbit_detailed, delta_sq_parts, h_distance, log_approx, Group, QuotientPoint, DEFAULT_BITS,
};
use robust_orbits::rop::{rop_dist_k, rop_logdist_t, SepBound};
use robust_orbits::torus::{
    invariant_matrix, orbit_equal_k, orbit_equal_t, polytope_origin_position, weights_span_affinely, PolytopePosition,
    TorusAction,
};

use super::{core_err, ensure, gen, tol};

const GUARD: usize = 8;

/// Decides `c1 + 4π² c2 <= 0`, refining `π` until the sign is certain.
/// Returns the verdict and the precision it took (0 when no `π` was needed).
fn le_zero(c1: &BigRational, c2: &BigRational) -> Result<(bool, u64), String> {
    if !c1.is_positive() && !c2.is_positive() {
        return Ok((true, 0));
    }
    if !c1.is_negative() && !c2.is_negative() {
        return Ok((false, 0));
    }
    let mut bits = 64;
    while bits <= tol::MAX_BITS {
        let four_pi_sq = pi(bits).sqr().scale(&BigRational::from_integer(4.into()));
        let iv = four_pi_sq.scale(c2).add_rat(c1);
        if !iv.hi.is_positive() {
            return Ok((true, bits));
        }
        if iv.lo.is_positive() {
            return Ok((false, bits));
        }
        bits *= 2;
    }
    Err(format!("sign of {c1} + 4 pi^2 {c2} undecided at {} bits", tol::MAX_BITS))
}

fn random_point(rng: &mut impl Rng, n: usize) -> QuotientPoint {
    let rho = gen::rat_vec(rng, n, 2, 8);
    let theta = (0..n).map(|_| gen::unit_fraction(rng, 16)).collect();
    QuotientPoint::new(rho, theta).expect("same length")
}

pub fn linear_forms() -> Result<String, String> {
    let mut rng = gen::rng(4);
    let mut refined = 0;
    let mut max_bits = 0;
    for i in 0..100 {
        let n = 2 + i % 4;
        let d = rng.gen_range(1..n);
        let act = TorusAction::new(gen::int_matrix(&mut rng, d, n, 3)).map_err(core_err)?;
        let h = invariant_matrix(&act);
        let (p, q) = (random_point(&mut rng, n), random_point(&mut rng, n));
        let orbit = delta_orbit_detailed(&act, &p, &q, Group::T, Backend::Exact, GUARD).map_err(core_err)?;
        let a1 = orbit.real_sq.clone();
        let b1 = orbit.imag.squared_exact.clone().ok_or("exact backend returned no exact value")?;
        let (hp, hq) = (p.map(&h.h).map_err(core_err)?, q.map(&h.h).map_err(core_err)?);
        let (a2, b2) = delta_sq_parts(&hp, &hq).map_err(core_err)?;
        let (smin_lo, _, _, smax_hi) = singular_brackets(&h.h, &pow2(-30)).map_err(core_err)?;
        let (lo, hi) = sigma_bounds(&h.h).map_err(core_err)?;
        ensure(lo <= smin_lo && smax_hi <= hi, || format!("case {i}: a priori bounds do not enclose the brackets"))?;

        let s2 = &smin_lo * &smin_lo;
        let (lower_ok, b_lo) = le_zero(&(&s2 * &a1 - &a2), &(&s2 * &b1 - &b2))?;
        let big2 = &smax_hi * &smax_hi;
        let (upper_ok, b_hi) = le_zero(&(&a2 - &big2 * &a1), &(&b2 - &big2 * &b1))?;
        ensure(lower_ok && upper_ok, || {
            format!("case {i}: sandwich fails (lower {lower_ok}, upper {upper_ok}) for M = {}", act.matrix())
        })?;
        if b_lo.max(b_hi) > 64 {
            refined += 1;
        }
        max_bits = max_bits.max(b_lo).max(b_hi);

        // The certified value of Δ(Hη, Hζ) must enclose the exact expression.
        let hd = h_distance(&h, &p, &q).map_err(core_err)?;
        let pv = pi(DEFAULT_BITS);
        let four = BigRational::from_integer(4.into());
        let sq_lo = &a2 + &four * &pv.lo * &pv.lo * &b2;
        let sq_hi = &a2 + &four * &pv.hi * &pv.hi * &b2;
        let (h_lo, h_hi) = (hd.lower().max(BigRational::zero()), hd.upper());
        ensure(&h_lo * &h_lo <= sq_hi && &h_hi * &h_hi >= sq_lo, || {
            format!("case {i}: certified Δ(Hη, Hζ) misses the exact value")
        })?;
    }
    Ok(format!(
        "100 cases with n <= 5: σmin Δ_T <= Δ(Hη, Hζ) <= σmax Δ_T certified; {refined} needed refinement beyond 64 bits (max {max_bits})"
    ))
}

/// `w` agreeing with `v` or its negative in some coordinates, random elsewhere.
fn partner(rng: &mut impl Rng, v: &[GaussianRational]) -> Vec<GaussianRational> {
    v.iter()
        .map(|z| match rng.gen_range(0..8) {
            0 => z.clone(),
            1 => -z.clone(),
            _ => gen::unit_gaussian(rng),
        })
        .collect()
}

pub fn metric_equivalence() -> Result<String, String> {
    let mut rng = gen::rng(5);
    let (mut tight, mut refined) = (0, 0);
    for i in 0..100 {
        let n = 1 + i % 3;
        let v: Vec<GaussianRational> = (0..n).map(|_| gen::unit_gaussian(&mut rng)).collect();
        let w = partner(&mut rng, &v);
        let d2 = dist_sq(&v, &w);
        let antipodal = v.iter().zip(&w).filter(|(a, b)| **a == -(*b).clone()).count();
        let degenerate = v.iter().zip(&w).all(|(a, b)| a == b || *a == -b.clone());
        if degenerate {
            // Coordinates that agree contribute 0 and antipodal ones contribute
            // exactly 2 to |v - w| and π to Δ, so the lower bound is an equality.
            tight += 1;
            let k = BigRational::from_integer(antipodal.into());
            ensure(d2 == BigRational::from_integer(4.into()) * &k, || format!("case {i}: |v - w|^2 = {d2}"))?;
            let eps = pow2(-64);
            let delta = delta_metric_bits(&log_approx(&v, &eps).map_err(core_err)?, &log_approx(&w, &eps).map_err(core_err)?, 64)
                .map_err(core_err)?;
            let pv = pi(64);
            let lo = delta.lower().max(BigRational::zero());
            ensure(&lo * &lo <= &pv.hi * &pv.hi * &k && delta.upper() * delta.upper() >= &pv.lo * &pv.lo * &k, || {
                format!("case {i}: Δ does not enclose π sqrt({k})")
            })?;
            continue;
        }
        let mut bits = 64;
        loop {
            let eps = pow2(-(bits as i64));
            let p = log_approx(&v, &eps).map_err(core_err)?;
            let q = log_approx(&w, &eps).map_err(core_err)?;
            let delta = delta_metric_bits(&p, &q, bits).map_err(core_err)?;
            let lo = delta.lower().max(BigRational::zero());
            let hi = delta.upper();
            let scaled = BigRational::from_integer(2.into()) * hi / pi(bits).lo;
            // (2/π)Δ <= |v - w| <= Δ, both sides squared.
            if &scaled * &scaled <= d2 && d2 <= &lo * &lo {
                break;
            }
            bits *= 2;
            if bits > tol::MAX_BITS {
                return Err(format!("case {i}: (2/π)Δ <= |v - w| <= Δ not certified for v = {v:?}, w = {w:?}"));
            }
            refined += 1;
        }
    }
    Ok(format!(
        "100 unit-modulus pairs with n <= 3: (2/π)Δ <= |v - w| <= Δ certified ({tight} exact equality cases, {refined} refinements)"
    ))
}

struct Case {
    m: &'static [&'static [i64]],
    v: &'static [&'static str],
    w: &'static [&'static str],
    t_equal: bool,
    k_equal: bool,
}

const fn case(
    m: &'static [&'static [i64]],
    v: &'static [&'static str],
    w: &'static [&'static str],
    t_equal: bool,
    k_equal: bool,
) -> Case {
    Case { m, v, w, t_equal, k_equal }
}

const DIAGONAL: &[&[i64]] = &[&[1, 1]];
const HYPERBOLIC: &[&[i64]] = &[&[1, -1]];
const CUSP: &[&[i64]] = &[&[2, -3]];
const FULL: &[&[i64]] = &[&[1, 0], &[0, 1]];
const CHAIN: &[&[i64]] = &[&[1, -1, 0], &[0, 1, -1]];
const TRIVIAL: &[&[i64]] = &[&[0, 0]];
const BALANCED: &[&[i64]] = &[&[1, 1, -2]];

/// Hand-derived orbit relations; `T` is `(C^×)^d` and `K` its unit circle subgroup.
const CASES: [Case; 30] = [
    case(DIAGONAL, &["1", "1"], &["1", "1"], true, true),
    case(DIAGONAL, &["1", "1"], &["2", "2"], true, false),
    case(DIAGONAL, &["1", "1"], &["i", "i"], true, true),
    case(DIAGONAL, &["1", "1"], &["1", "-1"], false, false),
    case(DIAGONAL, &["1", "2"], &["2", "4"], true, false),
    case(DIAGONAL, &["1", "2"], &["-1", "-2"], true, true),
    case(DIAGONAL, &["1", "2"], &["2", "1"], false, false),
    case(DIAGONAL, &["3", "1"], &["9/5+12/5i", "3/5+4/5i"], true, true),
    case(HYPERBOLIC, &["1", "1"], &["2", "1/2"], true, false),
    case(HYPERBOLIC, &["1", "1"], &["i", "-i"], true, true),
    case(HYPERBOLIC, &["1", "1"], &["2", "2"], false, false),
    case(HYPERBOLIC, &["1", "1"], &["1", "4"], false, false),
    case(HYPERBOLIC, &["2", "3"], &["6", "1"], true, false),
    case(HYPERBOLIC, &["2", "3"], &["-2", "-3"], true, true),
    case(HYPERBOLIC, &["1", "1"], &["-1", "-1"], true, true),
    case(HYPERBOLIC, &["1", "1"], &["-1", "1"], false, false),
    case(HYPERBOLIC, &["1", "2"], &["2", "1"], true, false),
    case(HYPERBOLIC, &["1", "i"], &["i", "1"], true, true),
    case(CUSP, &["1", "1"], &["4", "1/8"], true, false),
    case(CUSP, &["1", "1"], &["1", "-1"], true, true),
    case(CUSP, &["1", "1"], &["1", "1/2"], false, false),
    case(CUSP, &["1", "1"], &["-1", "1"], false, false),
    case(FULL, &["1", "1"], &["2", "3"], true, false),
    case(FULL, &["1", "1"], &["3/5+4/5i", "i"], true, true),
    case(CHAIN, &["1", "1", "1"], &["2", "1", "1/2"], true, false),
    case(CHAIN, &["1", "1", "1"], &["1", "1", "2"], false, false),
    case(CHAIN, &["1", "1", "1"], &["i", "-1", "i"], true, true),
    case(TRIVIAL, &["1", "2"], &["1", "2"], true, true),
    case(TRIVIAL, &["1", "2"], &["2", "1"], false, false),
    case(BALANCED, &["1", "1", "1"], &["2", "2", "1/4"], true, false),
];

fn vector(xs: &[&str]) -> Vec<GaussianRational> {
    xs.iter().map(|s| parse_gaussian(s).expect("curated literal")).collect()
}

pub fn orbit_equality() -> Result<String, String> {
    let sep = SepBound::new(BigRational::new(1.into(), 64.into())).map_err(core_err)?;
    let mut kn_cases = 0;
    for (i, c) in CASES.iter().enumerate() {
        let act = TorusAction::new(int_matrix(c.m)).map_err(core_err)?;
        let (v, w) = (vector(c.v), vector(c.w));
        let label = format!("case {} (M = {}, v = {:?}, w = {:?})", i + 1, act.matrix(), c.v, c.w);
        let t_eq = orbit_equal_t(&act, &v, &w).map_err(core_err)?;
        let k_eq = orbit_equal_k(&act, &v, &w).map_err(core_err)?;
        ensure(t_eq == c.t_equal && k_eq == c.k_equal, || format!("{label}: orbit_equal gives T {t_eq}, K {k_eq}"))?;
        let logdist = rop_logdist_t(&act, &v, &w, &sep, Backend::Exact).map_err(core_err)?;
        ensure(logdist.estimate.d.is_zero() == c.t_equal, || format!("{label}: log distance D = {}", logdist.estimate.d))?;
        let dist = rop_dist_k(&act, &v, &w, &sep, Backend::Exact).map_err(core_err)?;
        ensure(dist.estimate.d.is_zero() == c.k_equal, || format!("{label}: compact distance D = {}", dist.estimate.d))?;
        let closed = weights_span_affinely(&act)
            && polytope_origin_position(&act).map_err(core_err)? == PolytopePosition::Interior;
        if closed {
            kn_cases += 1;
            let kn = kn_orbit_equal(&act, &v, &w, &sep, Backend::Exact).map_err(core_err)?;
            ensure(kn.equal == c.t_equal, || format!("{label}: Kempf-Ness test says {}", kn.equal))?;
        }
    }
    Ok(format!(
        "30 curated cases: orbit_equal T/K, log and compact distances agree; Kempf-Ness agrees on the {kn_cases} closed-orbit cases"
    ))
}

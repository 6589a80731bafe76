//! Criteria on lattices: lifting, the CVP reduction, the SLDP backends and the
//! SLDP to orbit-distance round trips.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use robust_orbits::exactlinalg::linalg::{rank, solve};
use robust_orbits::exactlinalg::matrix::{to_rat, IntMatrix, Matrix, RatMatrix};
use robust_orbits::exactlinalg::numeric::pow2;
use robust_orbits::exactlinalg::spectral::singular_brackets;
use robust_orbits::lattices::sldp::sldp_exact_with_guard;
use robust_orbits::lattices::{cvp_exact_with_guard, projected_lattice_basis, sldp, Backend, CvpInstance, SldpInstance};
use robust_orbits::lifting::{cvp_to_sldp, lift_lattice, CvpReduction, ReductionPolicy};
use robust_orbits::rop::{reduce_sldp_to_rop, solve_rop, Setting};

use super::{core_err, ensure, gen};

/// Enumeration guard used throughout; every instance here has rank at most 6.
const GUARD: usize = 8;

/// Fraction-free Gaussian elimination.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Increasing `m`-subsets of `0..n` in lexicographic order.
fn next_subset(idx: &mut [usize], n: usize) -> bool {
    let m = idx.len();
    for i in (0..m).rev() {
        if idx[i] < n - m + i {
            idx[i] += 1;
            for j in i + 1..m {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `X Z^n = G Z^m` for integer `X` (m x n) and nonsingular `G`: every column of
/// `X` lies in `G Z^m`, and the gcd of the maximal minors of `X` is `|det G|`.
fn same_lattice(x: &IntMatrix, g: &IntMatrix) -> Result<bool, String> {
    let (m, n) = (x.rows(), x.cols());
    let gr = to_rat(g);
    for col in to_rat(x).to_cols() {
        let c = solve(&gr, &col).map_err(core_err)?;
        if !c.iter().all(|v| v.is_integer()) {
            return Ok(false);
        }
    }
    let det_g = bareiss(g.to_rows()).abs();
    // Containment makes every minor a multiple of det G, so the gcd can stop early.
    let mut gcd = BigInt::zero();
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        let minor: Vec<Vec<BigInt>> = (0..m).map(|r| idx.iter().map(|&c| x[(r, c)].clone()).collect()).collect();
        gcd = gcd.gcd(&bareiss(minor));
        if gcd == det_g || !next_subset(&mut idx, n) {
            break;
        }
    }
    Ok(gcd == det_g)
}

/// `Y Y^T = I`, with each row cleared to integers over its own denominator so
/// the n^2 dot products stay in integer arithmetic.
fn rows_orthonormal(y: &RatMatrix) -> bool {
    let rows: Vec<(Vec<BigInt>, BigInt)> = y
        .to_rows()
        .iter()
        .map(|row| {
            let den = row.iter().fold(BigInt::from(1), |acc, e| acc.lcm(e.denom()));
            (row.iter().map(|e| e.numer() * (&den / e.denom())).collect(), den)
        })
        .collect();
    rows.iter().enumerate().all(|(i, (a, da))| {
        rows[i..].iter().enumerate().all(|(k, (b, db))| {
            let d: BigInt = a.iter().zip(b).map(|(u, v)| u * v).sum();
            if k == 0 {
                d == da * db
            } else {
                d.is_zero()
            }
        })
    })
}

pub fn lifting() -> Result<String, String> {
    let mut rng = gen::rng(1);
    let mut max_n = 0;
    for i in 0..100 {
        let m = 1 + i % 4;
        let g = gen::nonsingular(&mut rng, m, 10);
        let r = lift_lattice(&g).map_err(core_err)?;
        let n = r.y.rows();
        max_n = max_n.max(n);
        ensure(r.n == n && r.y.cols() == n, || format!("lattice {i}: Y is not {n} x {n}"))?;
        ensure(rows_orthonormal(&r.y), || format!("lattice {i}: Y Y^T != I for G = {g}"))?;
        let x = r.scaled_projection();
        ensure(x.entries().iter().all(|e| e.is_integer()), || {
            format!("lattice {i}: s_total P(Y) is not integral for G = {g}")
        })?;
        let xi = x.map(|e| e.to_integer());
        ensure(same_lattice(&xi, &g)?, || format!("lattice {i}: s_total P(Y Z^n) != G Z^m for G = {g}"))?;
    }
    Ok(format!(
        "100 lattices with m <= 4, n up to {max_n}: Y Y^T = I and s_total P(Y Z^n) = G Z^m exactly"
    ))
}

/// No coefficient vector within `radius` of `coeffs` (in every coordinate) is closer to `t`.
fn locally_closest(g: &RatMatrix, t: &[BigRational], coeffs: &[BigInt], d2: &BigRational, radius: i64) -> bool {
    let m = coeffs.len();
    let side = (2 * radius + 1) as usize;
    (0..side.pow(m as u32)).all(|mut code| {
        let c: Vec<BigRational> = coeffs
            .iter()
            .map(|ci| {
                let off = (code % side) as i64 - radius;
                code /= side;
                BigRational::from_integer(ci + off)
            })
            .collect();
        let p = g.mul_vec(&c).expect("square");
        let dist: BigRational = t.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum();
        &dist >= d2
    })
}

pub fn cvp_reduction() -> Result<String, String> {
    let mut rng = gen::rng(2);
    let mut largest_scale = BigInt::zero();
    for i in 0..50 {
        let m = 1 + i % 3;
        let g = gen::nonsingular(&mut rng, m, 6);
        let t = gen::rat_vec(&mut rng, m, 10, 7);
        let inst = CvpInstance::new(g.clone(), t.clone()).map_err(core_err)?;
        let sol = cvp_exact_with_guard(&inst, GUARD).map_err(core_err)?;
        ensure(locally_closest(&to_rat(&g), &t, &sol.coeffs, &sol.dist_sq, 2), || {
            format!("instance {i}: a nearby lattice point beats the enumeration")
        })?;
        let CvpReduction::Reduced { s_total, instance, .. } =
            cvp_to_sldp(&inst, ReductionPolicy::default()).map_err(core_err)?
        else {
            return Err("the default policy did not reduce".into());
        };
        let (d2, _) = sldp_exact_with_guard(&instance, GUARD).map_err(core_err)?;
        let scale = BigRational::from_integer(&s_total * &s_total);
        ensure(sol.dist_sq == &scale * &d2, || {
            format!("instance {i}: dist^2(t, L) = {} but s_total^2 dist^2(t' + U, Z^n) = {}", sol.dist_sq, scale * &d2)
        })?;
        largest_scale = largest_scale.max(s_total);
    }
    Ok(format!(
        "50 instances with m <= 3: dist^2(t, L) = s_total^2 dist^2(t' + U, Z^n) exactly (s_total up to {largest_scale})"
    ))
}

/// `u` lies in the span of the generators of `U`.
fn in_span(inst: &SldpInstance, u: &[BigRational]) -> bool {
    if inst.u_basis.is_empty() {
        return u.iter().all(Zero::is_zero);
    }
    let mut rows = to_rat(&inst.u_matrix()).to_rows();
    let k = rows.len();
    rows.push(u.to_vec());
    rank(&Matrix::from_rows(rows).expect("same length")) == k
}

/// Upper bound on `(2 σ_max / σ_min)^2` for the invariant basis of `U`.
fn h_gamma_sq_bound(inst: &SldpInstance) -> Result<BigRational, String> {
    let pl = projected_lattice_basis(&inst.u_matrix()).map_err(core_err)?;
    let (smin_lo, _, _, smax_hi) = singular_brackets(&pl.w, &pow2(-30)).map_err(core_err)?;
    let ratio = smax_hi / smin_lo;
    Ok(BigRational::from_integer(4.into()) * &ratio * &ratio)
}

pub fn sldp_sandwich() -> Result<String, String> {
    let mut rng = gen::rng(3);
    let mut zero = 0;
    for i in 0..200 {
        let n = 2 + i % 5;
        let inst = gen::sldp_instance(&mut rng, n);
        let (d2, wit) = sldp_exact_with_guard(&inst, GUARD).map_err(core_err)?;
        ensure(wit.residual_sq(&inst.t) == d2 && in_span(&inst, &wit.u), || {
            format!("instance {i}: the exact witness does not attain {d2}")
        })?;
        if d2.is_zero() {
            zero += 1;
        }
        for backend in [Backend::HBased, Backend::Lll] {
            let (est, w) = sldp(&inst, backend, GUARD).map_err(core_err)?;
            let fail = |what: &str| format!("instance {i} (n = {n}, {backend}): {what}; d^2 = {d2}, D = {}", est.d);
            ensure(est.sandwiches_squared(&d2), || fail("d <= D <= gamma d fails"))?;
            let dd = &est.d * &est.d;
            let stated_sq = match backend {
                Backend::Lll => pow2(n as i64 + 2),
                _ => h_gamma_sq_bound(&inst)?,
            };
            ensure(dd <= &stated_sq * &d2, || fail("D exceeds the stated factor"))?;
            let r2 = w.residual_sq(&inst.t);
            ensure(in_span(&inst, &w.u), || fail("witness u is not in U"))?;
            ensure(d2 <= r2 && r2 <= &est.gamma * &est.gamma * &d2, || fail("witness residual exceeds gamma d"))?;
        }
    }
    Ok(format!(
        "200 instances with n <= 6 ({zero} at distance 0), h and lll backends: d <= D <= gamma d and residual <= gamma d"
    ))
}

pub fn round_trips() -> Result<String, String> {
    let mut rng = gen::rng(11);
    let mut worst: BTreeMap<String, BigRational> = BTreeMap::new();
    for i in 0..100 {
        let n = 1 + i % 4;
        let inst = gen::sldp_instance(&mut rng, n);
        let (d2, _) = sldp_exact_with_guard(&inst, GUARD).map_err(core_err)?;
        for setting in Setting::all() {
            let label = format!("({}, {})", setting.group, setting.metric);
            let red = reduce_sldp_to_rop(&inst, setting).map_err(core_err)?;
            let ans = solve_rop(&red.instance, Backend::Exact).map_err(core_err)?;
            let back = red.back_map.apply(&ans.estimate);
            ensure(back.sandwiches_squared(&d2), || {
                format!(
                    "instance {i} {label}: back-mapped D = {} with factor {} does not sandwich d^2 = {d2}",
                    back.d, back.gamma
                )
            })?;
            let w = worst.entry(label).or_insert_with(BigRational::zero);
            if back.gamma > *w {
                *w = back.gamma.clone();
            }
        }
    }
    let factors: Vec<String> = worst
        .iter()
        .map(|(k, g)| format!("{k} {:.4}", g.to_f64().unwrap_or(f64::NAN)))
        .collect();
    Ok(format!(
        "100 instances with n <= 4 in all four settings sandwich d exactly; largest composed factors: {}",
        factors.join(", ")
    ))
}

//! Hermite and Smith normal forms, integer kernels and integer linear systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::linalg::{fraction_free_rref, rank_int, FractionFreeRref};
use super::matrix::{IntMatrix, IntVector, Matrix};
use crate::error::{Error, Result};

/// Unimodular `[a, b, c, d]` sending `(pa, pb)` to `(g, 0)`, plain elimination
/// when `pa | pb` so the pivot stays put.
fn bezout_step(pa: &BigInt, pb: &BigInt) -> [BigInt; 4] {
    if !pa.is_zero() && pb.is_multiple_of(pa) {
        return [BigInt::one(), BigInt::zero(), -(pb / pa), BigInt::one()];
    }
    let eg = pa.extended_gcd(pb);
    let c = -(pb / &eg.gcd);
    let d = pa / &eg.gcd;
    [eg.x, eg.y, c, d]
}

fn combine_rows(m: &mut IntMatrix, r: usize, i: usize, coeffs: [&BigInt; 4]) {
    let [a, b, c, d] = coeffs;
    for j in 0..m.cols() {
        let x = m[(r, j)].clone();
        let y = m[(i, j)].clone();
        m[(r, j)] = a * &x + b * &y;
        m[(i, j)] = c * &x + d * &y;
    }
}

fn combine_cols(m: &mut IntMatrix, r: usize, i: usize, coeffs: [&BigInt; 4]) {
    let [a, b, c, d] = coeffs;
    for k in 0..m.rows() {
        let x = m[(k, r)].clone();
        let y = m[(k, i)].clone();
        m[(k, r)] = a * &x + b * &y;
        m[(k, i)] = c * &x + d * &y;
    }
}

fn add_row_multiple(m: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    for j in 0..m.cols() {
        let v = &m[(src, j)] * k;
        m[(dst, j)] += v;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for j in 0..m.cols() {
        let v = -m[(r, j)].clone();
        m[(r, j)] = v;
    }
}

/// Row Hermite normal form. Returns `(H, U)` with `H = U A`, `U` unimodular.
///
/// Pivots are positive and entries above a pivot lie in `[0, pivot)`. Zero rows come last.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (h, u) = hnf_impl(a, true);
    (h, u.expect("transform requested"))
}

/// Row Hermite normal form without the transform.
pub fn hnf_only(a: &IntMatrix) -> IntMatrix {
    hnf_impl(a, false).0
}

fn hnf_impl(a: &IntMatrix, track: bool) -> (IntMatrix, Option<IntMatrix>) {
    let mut h = a.clone();
    let mut u = track.then(|| Matrix::identity(a.rows()));
    let mut r = 0;
    for c in 0..h.cols() {
        if r == h.rows() {
            break;
        }
        for i in r + 1..h.rows() {
            if h[(i, c)].is_zero() {
                continue;
            }
            if h[(r, c)].is_zero() {
                h.swap_rows(r, i);
                if let Some(u) = u.as_mut() {
                    u.swap_rows(r, i);
                }
                continue;
            }
            let [x, y, c2, d2] = bezout_step(&h[(r, c)], &h[(i, c)]);
            combine_rows(&mut h, r, i, [&x, &y, &c2, &d2]);
            if let Some(u) = u.as_mut() {
                combine_rows(u, r, i, [&x, &y, &c2, &d2]);
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_row(&mut h, r);
            if let Some(u) = u.as_mut() {
                negate_row(u, r);
            }
        }
        let p = h[(r, c)].clone();
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&p);
            if q.is_zero() {
                continue;
            }
            add_row_multiple(&mut h, i, r, &q);
            if let Some(u) = u.as_mut() {
                add_row_multiple(u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Number of nonzero rows of a matrix in row echelon form.
fn echelon_rank(h: &IntMatrix) -> usize {
    (0..h.rows()).take_while(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
}

/// Nonzero rows of the row HNF: the canonical basis of the row lattice.
pub fn row_lattice_basis(a: &IntMatrix) -> IntMatrix {
    let h = hnf_only(a);
    let r = echelon_rank(&h);
    h.select_rows(0..r)
}

/// Canonical basis (as rows) of the lattice generated by the columns of `a`.
pub fn column_lattice_basis(a: &IntMatrix) -> IntMatrix {
    row_lattice_basis(&a.transpose())
}

/// Whether the columns of `a` and `b` generate the same lattice.
pub fn same_column_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    a.rows() == b.rows() && column_lattice_basis(a) == column_lattice_basis(b)
}

/// Basis of the lattice spanned by the rows `gens`, with integer coefficient vectors
/// expressing each basis row in terms of the generators.
pub fn basis_with_preimages(gens: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (h, u) = hnf(gens);
    let r = echelon_rank(&h);
    (h.select_rows(0..r), u.select_rows(0..r))
}

/// Smith normal form `S = U A V` with `d_i | d_{i+1}` and `d_i >= 0`.
pub fn snf(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u: IntMatrix = Matrix::identity(m);
    let mut v: IntMatrix = Matrix::identity(n);
    let kmax = m.min(n);
    let mut t = 0;
    while t < kmax {
        // Pivot: smallest nonzero absolute value in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if s[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let [x, y, c2, d2] = bezout_step(&s[(t, t)], &s[(i, t)]);
                combine_rows(&mut s, t, i, [&x, &y, &c2, &d2]);
                combine_rows(&mut u, t, i, [&x, &y, &c2, &d2]);
                changed = true;
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let [x, y, c2, d2] = bezout_step(&s[(t, t)], &s[(t, j)]);
                combine_cols(&mut s, t, j, [&x, &y, &c2, &d2]);
                combine_cols(&mut v, t, j, [&x, &y, &c2, &d2]);
                changed = true;
            }
            if changed {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and retry.
            let p = s[(t, t)].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    add_row_multiple(&mut s, t, i, &BigInt::one());
                    add_row_multiple(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    (s, u, v)
}

/// Diagonal of the Smith normal form.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let (s, _, _) = snf(a);
    (0..a.rows().min(a.cols())).map(|i| s[(i, i)].clone()).collect()
}

/// Whether the rows of `a` form a basis of a saturated sublattice, equivalently
/// whether `a(Z^n) = Z^k` with `k` the number of rows.
///
/// A full-rank row lattice is saturated exactly when it equals the kernel of its
/// kernel; both sides are compared in Hermite normal form.
pub fn is_saturated(a: &IntMatrix) -> bool {
    if a.rows() > a.cols() || rank_int(a) != a.rows() {
        return false;
    }
    row_lattice_basis(a) == kernel_lattice_basis(&kernel_lattice_basis(a))
}

/// Z-basis (rows) of `{x in Z^n : M x = 0}`, in Hermite normal form.
///
/// With `R = d rref(M)`, a rational kernel vector is fixed by its free
/// coordinates `c`, and `x = (c F) / d` for the integer matrix `F` built from the
/// free columns of `R`. The integral ones are those with `R_free c = 0 (mod d)`,
/// a lattice containing `d Z^r` whose basis is kept reduced modulo `d`.
pub fn kernel_lattice_basis(m: &IntMatrix) -> IntMatrix {
    let n = m.cols();
    if m.rows() == 0 {
        return Matrix::identity(n);
    }
    let FractionFreeRref { reduced, pivots, det } = fraction_free_rref(m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let r = free.len();
    if r == 0 {
        return Matrix::empty(n);
    }
    let d = det.abs();
    // Row k of `f` is d times the rational kernel vector with free coordinate e_k.
    let mut f: IntMatrix = Matrix::zeros(r, n);
    for (k, &fc) in free.iter().enumerate() {
        f[(k, fc)] = det.clone();
        for (i, &pc) in pivots.iter().enumerate() {
            f[(k, pc)] = -reduced[(i, fc)].clone();
        }
    }
    let mut basis: IntMatrix = Matrix::identity(r);
    for i in 0..pivots.len() {
        let coeffs: IntVector = free.iter().map(|&fc| reduced[(i, fc)].clone()).collect();
        basis = congruence_sublattice(&basis, &coeffs, &d);
    }
    let rows: Vec<IntVector> = basis
        .to_rows()
        .iter()
        .map(|c| {
            (0..n)
                .map(|j| {
                    let s: BigInt = c.iter().enumerate().map(|(k, ck)| ck * &f[(k, j)]).sum();
                    debug_assert!((&s % &det).is_zero());
                    s / &det
                })
                .collect()
        })
        .collect();
    row_lattice_basis(&Matrix::from_rows(rows).expect("equal lengths"))
}

/// `{x in L : a . x = 0 (mod d)}` for the full-rank lattice `L` with basis rows
/// `basis`, assuming `d Z^r` lies in the result. Returns an HNF basis with
/// entries below `d`.
fn congruence_sublattice(basis: &IntMatrix, a: &[BigInt], d: &BigInt) -> IntMatrix {
    let r = basis.rows();
    let mut w: IntVector = basis
        .to_rows()
        .iter()
        .map(|b| b.iter().zip(a).map(|(x, y)| x * y).sum::<BigInt>().mod_floor(d))
        .collect();
    if w.iter().all(Zero::is_zero) {
        return basis.clone();
    }
    // Kernel of the row (w, d): unimodular column operations folding every
    // entry into the last one; the other columns, cut to r coordinates, span it.
    w.push(d.clone());
    let mut t: IntMatrix = Matrix::identity(r + 1);
    for j in 0..r {
        if w[j].is_zero() {
            continue;
        }
        let [x, y, c2, d2] = bezout_step(&w[r], &w[j]);
        combine_cols(&mut t, r, j, [&x, &y, &c2, &d2]);
        w[r] = &x * &w[r] + &y * &w[j];
        w[j] = BigInt::zero();
    }
    let mut gens: Vec<IntVector> = (0..r)
        .map(|j| {
            (0..r)
                .map(|k| (0..r).map(|i| &t[(i, j)] * &basis[(i, k)]).sum())
                .collect()
        })
        .collect();
    gens.extend((0..r).map(|k| {
        let mut e = vec![BigInt::zero(); r];
        e[k] = d.clone();
        e
    }));
    row_lattice_basis(&Matrix::from_rows(gens).expect("equal lengths"))
}

/// Some `x in Z^n` with `A x = b`, or `None`.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<IntVector>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch("rhs length".into()));
    }
    let (s, u, v) = snf(a);
    let ub = u.mul_vec(b)?;
    let r = (0..a.rows().min(a.cols()))
        .take_while(|&i| !s[(i, i)].is_zero())
        .count();
    if ub[r..].iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..r {
        let (q, rem) = ub[i].div_rem(&s[(i, i)]);
        if !rem.is_zero() {
            return Ok(None);
        }
        y[i] = q;
    }
    Ok(Some(v.mul_vec(&y)?))
}

/// Same as [`solve_integer`] for a rational right-hand side.
pub fn solve_integer_rat(a: &IntMatrix, b: &[BigRational]) -> Result<Option<IntVector>> {
    if b.iter().any(|x| !x.is_integer()) {
        // A x is integral for integral x.
        return Ok(None);
    }
    let bi: Vec<BigInt> = b.iter().map(BigRational::to_integer).collect();
    solve_integer(a, &bi)
}

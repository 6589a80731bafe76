//! Dense exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{dot, IntMatrix, Matrix, RatMatrix, RatVector};
use crate::error::{Error, Result};

/// Reduced row echelon form. Returns the matrix and the pivot columns.
pub fn rref(a: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows()).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m[(r, c)].recip();
        for j in c..m.cols() {
            let v = &m[(r, j)] * &inv;
            m[(r, j)] = v;
        }
        for i in 0..m.rows() {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..m.cols() {
                let v = &m[(i, j)] - &f * &m[(r, j)];
                m[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &RatMatrix) -> usize {
    rref(a).1.len()
}

pub fn rank_int(a: &IntMatrix) -> usize {
    fraction_free_rref(a).pivots.len()
}

/// Output of [`fraction_free_rref`]: `reduced = det * rref(A)` on its first
/// `pivots.len()` rows, zero below.
#[derive(Clone, Debug)]
pub struct FractionFreeRref {
    pub reduced: IntMatrix,
    pub pivots: Vec<usize>,
    /// Common pivot value, a leading minor of `A` up to sign (1 for rank 0).
    pub det: BigInt,
}

/// Fraction-free Gauss-Jordan elimination. Every intermediate entry is a minor
/// of `A`, so sizes stay polynomial and every division is exact.
pub fn fraction_free_rref(a: &IntMatrix) -> FractionFreeRref {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let piv = m[(r, c)].clone();
        for i in (0..rows).filter(|&i| i != r) {
            let f = m[(i, c)].clone();
            for j in 0..cols {
                let v = &piv * &m[(i, j)] - &f * &m[(r, j)];
                debug_assert!((&v % &prev).is_zero());
                m[(i, j)] = v / &prev;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    FractionFreeRref {
        reduced: m,
        pivots,
        det: prev,
    }
}

/// Determinant by fraction-free elimination.
pub fn det_int(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if p != k {
            m.swap_rows(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * &m[(n - 1, n - 1)])
}

pub fn det(a: &RatMatrix) -> Result<BigRational> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut d = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
            return Ok(BigRational::zero());
        };
        if p != k {
            m.swap_rows(p, k);
            d = -d;
        }
        let piv = m[(k, k)].clone();
        d *= &piv;
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = &m[(i, k)] / &piv;
            for j in k..n {
                let v = &m[(i, j)] - &f * &m[(k, j)];
                m[(i, j)] = v;
            }
        }
    }
    Ok(d)
}

pub fn inverse(a: &RatMatrix) -> Result<RatMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let n = a.rows();
    let aug = a.hstack(&Matrix::identity(n))?;
    let (r, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] >= n {
        return Err(Error::Singular);
    }
    Ok(Matrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
}

/// Solves `A x = b` for square nonsingular `A`.
pub fn solve(a: &RatMatrix, b: &[BigRational]) -> Result<RatVector> {
    if !a.is_square() || a.rows() != b.len() {
        return Err(Error::DimensionMismatch("solve expects square A and matching b".into()));
    }
    let n = a.rows();
    let bcol = Matrix::from_fn(n, 1, |i, _| b[i].clone());
    let (r, piv) = rref(&a.hstack(&bcol)?);
    if piv.len() < n || piv[n - 1] >= n {
        return Err(Error::Singular);
    }
    Ok(r.col(n))
}

/// Any solution of `A x = b`, or `None` when the system is inconsistent.
pub fn solve_any(a: &RatMatrix, b: &[BigRational]) -> Result<Option<RatVector>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch("rhs length".into()));
    }
    let n = a.cols();
    let bcol = Matrix::from_fn(a.rows(), 1, |i, _| b[i].clone());
    let (r, piv) = rref(&a.hstack(&bcol)?);
    if piv.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = r[(i, n)].clone();
    }
    Ok(Some(x))
}

/// Rational basis (as rows) of `{x : A x = 0}`.
pub fn nullspace(a: &RatMatrix) -> RatMatrix {
    let n = a.cols();
    let (r, piv) = rref(a);
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    let rows: Vec<RatVector> = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (i, &c) in piv.iter().enumerate() {
                v[c] = -r[(i, f)].clone();
            }
            v
        })
        .collect();
    if rows.is_empty() {
        Matrix::empty(n)
    } else {
        Matrix::from_rows(rows).expect("uniform rows")
    }
}

pub fn is_independent(rows: &RatMatrix) -> bool {
    rank(rows) == rows.rows()
}

/// Classical Gram–Schmidt without normalisation.
pub fn gram_schmidt(vs: &[RatVector]) -> Result<Vec<RatVector>> {
    let mut out: Vec<RatVector> = Vec::with_capacity(vs.len());
    let mut norms: Vec<BigRational> = Vec::with_capacity(vs.len());
    for v in vs {
        if let Some(first) = vs.first() {
            if v.len() != first.len() {
                return Err(Error::DimensionMismatch("vectors of unequal length".into()));
            }
        }
        let mut w = v.clone();
        for (b, nb) in out.iter().zip(&norms) {
            let mu = dot(v, b) / nb;
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= &mu * bi;
            }
        }
        let nw = dot(&w, &w);
        if nw.is_zero() {
            return Err(Error::DependentVectors);
        }
        out.push(w);
        norms.push(nw);
    }
    Ok(out)
}

/// Orthogonal projection of `t` onto the row space of `rows` (rows may be dependent).
pub fn project_onto_rowspace(rows: &RatMatrix, t: &[BigRational]) -> Result<RatVector> {
    let (r, piv) = rref(rows);
    if piv.is_empty() {
        return Ok(vec![BigRational::zero(); t.len()]);
    }
    let basis = r.select_rows(0..piv.len());
    let gram = basis.gram_rows();
    let rhs = basis.mul_vec(t)?;
    let c = solve(&gram, &rhs)?;
    let bt = basis.transpose();
    bt.mul_vec(&c)
}

/// Checks symmetric positive definiteness through leading principal minors. Returns
/// the 1-based index of the first non-positive minor on failure.
pub fn check_positive_definite(a: &RatMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("expected a square matrix".into()));
    }
    if *a != a.transpose() {
        return Err(Error::Precondition("matrix is not symmetric".into()));
    }
    let n = a.rows();
    let mut m = a.clone();
    for k in 0..n {
        let piv = m[(k, k)].clone();
        if !piv.is_positive() {
            return Err(Error::NotPositiveDefinite { minor: k + 1 });
        }
        for i in k + 1..n {
            let f = &m[(i, k)] / &piv;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = &m[(i, j)] - &f * &m[(k, j)];
                m[(i, j)] = v;
            }
        }
    }
    Ok(())
}

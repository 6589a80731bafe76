//! Integral LLL reduction (δ = 3/4) driven purely by a Gram matrix.
//!
//! The basis is implicit: row `i` of the returned transform `T` expresses the
//! `i`-th reduced vector in terms of the input basis, so the reduced Gram matrix
//! is `T Q T^T`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlinalg::matrix::{clear_denominators, to_rat, IntMatrix, Matrix, RatMatrix};

/// Nearest integer to `a / b` for `b > 0`, ties toward +infinity.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a * BigInt::from(2) + b).div_floor(&(b * BigInt::from(2)))
}

struct State {
    g: IntMatrix,
    t: IntMatrix,
    lam: Vec<Vec<BigInt>>,
    d: Vec<BigInt>,
}

impl State {
    // Indices follow the 1-based convention of the textbook algorithm.
    fn gij(&self, i: usize, j: usize) -> &BigInt {
        &self.g[(i - 1, j - 1)]
    }

    /// `b_k <- b_k - q b_l`, updating Gram and transform.
    fn sub_mul(&mut self, k: usize, l: usize, q: &BigInt) {
        let n = self.g.rows();
        let (k0, l0) = (k - 1, l - 1);
        for j in 0..n {
            let v = &self.t[(l0, j)] * q;
            self.t[(k0, j)] -= v;
        }
        // Row k then column k of the Gram matrix.
        for j in 0..n {
            let v = &self.g[(l0, j)] * q;
            self.g[(k0, j)] -= v;
        }
        for i in 0..n {
            let v = &self.g[(i, l0)] * q;
            self.g[(i, k0)] -= v;
        }
    }

    fn red(&mut self, k: usize, l: usize) {
        let two_lam: BigInt = &self.lam[k][l] * BigInt::from(2);
        if two_lam.abs() <= self.d[l] {
            return;
        }
        let q = round_div(&self.lam[k][l], &self.d[l]);
        self.sub_mul(k, l, &q);
        let v = &q * &self.d[l];
        self.lam[k][l] -= v;
        for i in 1..l {
            let v = &q * &self.lam[l][i];
            self.lam[k][i] -= v;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.g.swap_rows(k - 1, k - 2);
        self.g.swap_cols(k - 1, k - 2);
        self.t.swap_rows(k - 1, k - 2);
        for j in 1..k - 1 {
            let tmp = std::mem::take(&mut self.lam[k][j]);
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], tmp);
        }
        let lam = self.lam[k][k - 1].clone();
        let b = (&self.d[k - 2] * &self.d[k] + &lam * &lam) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k - 1];
            self.lam[i][k - 1] = (&b * &t + &lam * &self.lam[i][k]) / &self.d[k];
        }
        self.d[k - 1] = b;
    }
}

/// LLL-reduces the lattice with (positive definite) Gram matrix `q`.
/// Returns the unimodular transform `T` and the reduced Gram matrix `T q T^T`.
pub fn lll_gram(q: &RatMatrix) -> Result<(IntMatrix, RatMatrix)> {
    let n = q.rows();
    if !q.is_square() {
        return Err(Error::DimensionMismatch("Gram matrix must be square".into()));
    }
    if n == 0 {
        return Ok((Matrix::empty(0), Matrix::empty(0)));
    }
    let (g, _) = clear_denominators(q);
    let mut st = State {
        g,
        t: Matrix::identity(n),
        lam: vec![vec![BigInt::zero(); n + 1]; n + 1],
        d: vec![BigInt::zero(); n + 1],
    };
    st.d[0] = BigInt::one();
    st.d[1] = st.gij(1, 1).clone();
    if !st.d[1].is_positive() {
        return Err(Error::DependentVectors);
    }
    let (mut k, mut kmax) = (2usize, 1usize);
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = st.gij(k, j).clone();
                for i in 1..j {
                    u = (&st.d[i] * &u - &st.lam[k][i] * &st.lam[j][i]) / &st.d[i - 1];
                }
                if j < k {
                    st.lam[k][j] = u;
                } else {
                    if !u.is_positive() {
                        return Err(Error::DependentVectors);
                    }
                    st.d[k] = u;
                }
            }
        }
        st.red(k, k - 1);
        let lhs: BigInt = &st.d[k] * &st.d[k - 2] * BigInt::from(4);
        let rhs: BigInt =
            &st.d[k - 1] * &st.d[k - 1] * BigInt::from(3) - &st.lam[k][k - 1] * &st.lam[k][k - 1] * BigInt::from(4);
        if lhs < rhs {
            st.swap(k, kmax);
            k = (k - 1).max(2);
        } else {
            for l in (1..k - 1).rev() {
                st.red(k, l);
            }
            k += 1;
        }
    }
    let tq = to_rat(&st.t);
    let reduced = &(&tq * q) * &tq.transpose();
    Ok((st.t, reduced))
}

/// Gram–Schmidt data of a Gram matrix: coefficients `mu[i][j]` (j < i) and squared
/// lengths `bstar[i]`.
pub fn gram_schmidt_gram(q: &RatMatrix) -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let n = q.rows();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut bstar = vec![BigRational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = q[(i, j)].clone();
            for l in 0..j {
                s -= &mu[i][l] * &mu[j][l] * &bstar[l];
            }
            mu[i][j] = s / &bstar[j];
        }
        let mut s = q[(i, i)].clone();
        for l in 0..i {
            s -= &mu[i][l] * &mu[i][l] * &bstar[l];
        }
        if !s.is_positive() {
            return Err(Error::DependentVectors);
        }
        bstar[i] = s;
    }
    Ok((mu, bstar))
}

/// Whether the Gram matrix describes an LLL-reduced basis for δ = 3/4.
pub fn is_lll_reduced_gram(q: &RatMatrix) -> bool {
    let Ok((mu, bstar)) = gram_schmidt_gram(q) else {
        return false;
    };
    let half = BigRational::new(1.into(), 2.into());
    let delta = BigRational::new(3.into(), 4.into());
    for i in 0..q.rows() {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 {
            let lhs = &bstar[i] + &mu[i][i - 1] * &mu[i][i - 1] * &bstar[i - 1];
            if lhs < &delta * &bstar[i - 1] {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::linalg::det_int;
    use crate::exactlinalg::matrix::int_matrix;

    fn gram_of_cols(g: &IntMatrix) -> RatMatrix {
        to_rat(&g.transpose().gram_rows())
    }

    #[test]
    fn identity_is_reduced() {
        let (t, r) = lll_gram(&Matrix::identity(2)).unwrap();
        assert_eq!(t, Matrix::identity(2));
        assert_eq!(r, Matrix::identity(2));
    }

    #[test]
    fn skewed_basis_reduces() {
        let g = int_matrix(&[&[201, 200], &[1, 1]]);
        let (t, r) = lll_gram(&gram_of_cols(&g)).unwrap();
        assert!(det_int(&t).unwrap().abs().is_one());
        assert!(is_lll_reduced_gram(&r));
        // det = 1, so the lattice is Z^2 and reduced vectors are short.
        assert!(r[(0, 0)] <= BigRational::from_integer(2.into()));
    }

    #[test]
    fn dependent_rejected() {
        let g = int_matrix(&[&[1, 2], &[2, 4]]);
        assert!(lll_gram(&gram_of_cols(&g)).is_err());
    }
}

//! Sums of squares of integers and of rational linear forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlinalg::linalg::{check_positive_definite, inverse};
use crate::exactlinalg::matrix::{common_denominator, to_rat, IntMatrix, Matrix, RatMatrix, RatVector};
use crate::exactlinalg::numeric::ceil_log2_log2;

/// Greedy decomposition `D = a_1^2 + ... + a_k^2` with `a_i = floor(sqrt(residual))`.
///
/// The residual after one step is below `2 sqrt(D) + 1`, so the number of terms is
/// `O(log log D)`.
pub fn sum_of_squares(d: &BigInt) -> Result<Vec<BigInt>> {
    if d.is_negative() {
        return Err(Error::Precondition("sum of squares of a negative number".into()));
    }
    let mut r = d.clone();
    let mut out = Vec::new();
    while !r.is_zero() {
        let a = r.sqrt();
        r -= &a * &a;
        out.push(a);
    }
    Ok(out)
}

/// Upper bound on the greedy length: `ceil(log2 log2 D) + 4` (with `D` read as at least 2).
pub fn sos_length_bound(d: &BigInt) -> u64 {
    ceil_log2_log2(d) + 4
}

/// Integral congruence diagonalisation `Q A Q^T = diag(d)` of a positive definite `A`.
///
/// The row operations act on `c A` with `c` the common denominator, each combining
/// two rows with gcd-reduced integer multipliers, so `Q` is integral.
pub fn lagrange_diagonalize(a: &RatMatrix) -> Result<(IntMatrix, Vec<BigRational>)> {
    check_positive_definite(a)?;
    let c = common_denominator(a.entries());
    let cr = BigRational::from_integer(c.clone());
    let scaled = a.map(|x| (x * &cr).to_integer());
    let (q, diag) = diagonalize_int(&scaled);
    Ok((q, diag.into_iter().map(|e| BigRational::new(e, c.clone())).collect()))
}

/// Congruence diagonalisation of an integral positive definite matrix.
fn diagonalize_int(b: &IntMatrix) -> (IntMatrix, Vec<BigInt>) {
    let m = b.rows();
    let mut mm = b.clone();
    let mut q: IntMatrix = Matrix::identity(m);
    for i in 0..m {
        for j in i + 1..m {
            if mm[(j, i)].is_zero() {
                continue;
            }
            let g = mm[(i, i)].gcd(&mm[(j, i)]);
            let ca = &mm[(i, i)] / &g;
            let cb = &mm[(j, i)] / &g;
            // Row j <- ca row j - cb row i, then the same on columns.
            for k in 0..m {
                let v = &ca * &mm[(j, k)] - &cb * &mm[(i, k)];
                mm[(j, k)] = v;
                let w = &ca * &q[(j, k)] - &cb * &q[(i, k)];
                q[(j, k)] = w;
            }
            for k in 0..m {
                let v = &ca * &mm[(k, j)] - &cb * &mm[(k, i)];
                mm[(k, j)] = v;
            }
            // Keep entries small: divide row/column j by their common content.
            let content = (0..m).fold(BigInt::zero(), |acc, k| acc.gcd(&q[(j, k)]));
            if content > BigInt::from(1) {
                let c2 = &content * &content;
                if (0..m).all(|k| mm[(j, k)].is_multiple_of(&content)) && mm[(j, j)].is_multiple_of(&c2) {
                    for k in 0..m {
                        q[(j, k)] = &q[(j, k)] / &content;
                        if k != j {
                            mm[(j, k)] = &mm[(j, k)] / &content;
                            mm[(k, j)] = &mm[(k, j)] / &content;
                        }
                    }
                    mm[(j, j)] = &mm[(j, j)] / &c2;
                }
            }
        }
    }
    let d = (0..m).map(|i| mm[(i, i)].clone()).collect();
    (q, d)
}

/// Output of [`waring_decompose_detailed`].
#[derive(Clone, Debug)]
pub struct Waring {
    /// Vectors `l_i` with `sum l_i l_i^T = A`.
    pub vectors: Vec<RatVector>,
    /// Diagonal of `Q (c^2 A) Q^T`, each entry decomposed greedily.
    pub scaled_diagonal: Vec<BigInt>,
    /// The common denominator `c` of `A`.
    pub scale: BigInt,
}

impl Waring {
    /// `m (ceil(log2 log2 d_max) + 4)` for the largest scaled diagonal entry.
    pub fn length_bound(&self) -> u64 {
        let dmax = self.scaled_diagonal.iter().max().cloned().unwrap_or_default();
        self.scaled_diagonal.len() as u64 * sos_length_bound(&dmax)
    }
}

/// Writes a positive definite rational form as `sum l_i l_i^T`.
pub fn waring_decompose_detailed(a: &RatMatrix) -> Result<Waring> {
    check_positive_definite(a)?;
    let m = a.rows();
    let c = common_denominator(a.entries());
    let c2 = BigRational::from_integer(&c * &c);
    let scaled = a.map(|x| (x * &c2).to_integer());
    let (q, diag) = diagonalize_int(&scaled);
    let qinv = inverse(&to_rat(&q))?;
    let cr = BigRational::from_integer(c.clone());
    let mut vectors = Vec::new();
    for (i, e) in diag.iter().enumerate() {
        let col: RatVector = (0..m).map(|r| &qinv[(r, i)] / &cr).collect();
        for s in sum_of_squares(e)? {
            let sr = BigRational::from_integer(s);
            vectors.push(col.iter().map(|x| x * &sr).collect());
        }
    }
    Ok(Waring {
        vectors,
        scaled_diagonal: diag,
        scale: c,
    })
}

pub fn waring_decompose(a: &RatMatrix) -> Result<Vec<RatVector>> {
    Ok(waring_decompose_detailed(a)?.vectors)
}

/// `sum l_i l_i^T`.
pub fn outer_sum(ls: &[RatVector], m: usize) -> RatMatrix {
    let mut out: RatMatrix = Matrix::zeros(m, m);
    for l in ls {
        for i in 0..m {
            for j in 0..m {
                out[(i, j)] += &l[i] * &l[j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::matrix::{int_matrix, rat, rat_matrix};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn sos_examples() {
        assert!(sum_of_squares(&BigInt::zero()).unwrap().is_empty());
        assert_eq!(sum_of_squares(&BigInt::from(12)).unwrap(), ints(&[3, 1, 1, 1]));
        assert_eq!(sum_of_squares(&BigInt::from(1_000_000)).unwrap(), ints(&[1000]));
        assert!(sum_of_squares(&BigInt::from(-1)).is_err());
    }

    #[test]
    fn lagrange_examples() {
        let (q, d) = lagrange_diagonalize(&Matrix::identity(2)).unwrap();
        assert_eq!(q, Matrix::identity(2));
        assert_eq!(d, vec![rat(1, 1), rat(1, 1)]);
        let a = rat_matrix(&[&[(2, 1), (1, 1)], &[(1, 1), (2, 1)]]);
        let (q, d) = lagrange_diagonalize(&a).unwrap();
        assert_eq!(q, int_matrix(&[&[1, 0], &[-1, 2]]));
        assert_eq!(d, vec![rat(2, 1), rat(6, 1)]);
        let qa = &(&to_rat(&q) * &a) * &to_rat(&q).transpose();
        assert_eq!(qa, Matrix::diagonal(&d));
        let (q, d) = lagrange_diagonalize(&rat_matrix(&[&[(5, 1)]])).unwrap();
        assert_eq!(q, int_matrix(&[&[1]]));
        assert_eq!(d, vec![rat(5, 1)]);
    }

    #[test]
    fn lagrange_rejects_indefinite() {
        let a = rat_matrix(&[&[(1, 1), (3, 1)], &[(3, 1), (1, 1)]]);
        assert_eq!(lagrange_diagonalize(&a), Err(Error::NotPositiveDefinite { minor: 2 }));
    }

    #[test]
    fn waring_examples() {
        let a = rat_matrix(&[&[(2, 1), (1, 1)], &[(1, 1), (2, 1)]]);
        let ls = waring_decompose(&a).unwrap();
        assert_eq!(ls.len(), 5);
        assert_eq!(outer_sum(&ls, 2), a);
        let mut got: Vec<RatVector> = ls.clone();
        got.sort();
        let mut want = vec![
            vec![rat(1, 1), rat(1, 2)],
            vec![rat(1, 1), rat(1, 2)],
            vec![rat(0, 1), rat(1, 1)],
            vec![rat(0, 1), rat(1, 2)],
            vec![rat(0, 1), rat(1, 2)],
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(waring_decompose(&rat_matrix(&[&[(4, 1)]])).unwrap(), vec![vec![rat(2, 1)]]);
        assert_eq!(waring_decompose(&Matrix::identity(2)).unwrap().len(), 2);
    }

    #[test]
    fn waring_rational_entries() {
        let a = rat_matrix(&[&[(5, 4)]]);
        let mut ls = waring_decompose(&a).unwrap();
        ls.sort();
        assert_eq!(ls, vec![vec![rat(1, 2)], vec![rat(1, 1)]]);
        let a = rat_matrix(&[&[(7, 3), (1, 5)], &[(1, 5), (2, 7)]]);
        let w = waring_decompose_detailed(&a).unwrap();
        assert_eq!(outer_sum(&w.vectors, 2), a);
        assert!(w.vectors.len() as u64 <= w.length_bound());
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlinalg::matrix::{common_denominator, Matrix, RatMatrix, RatVector};

/// Extends the orthonormal rows of `x` (`x x^T = I_m`) to a rational orthogonal
/// `n x n` matrix whose first `m` rows are `x`. Returns the matrix and the number
/// of reflections used (at most `m`).
///
/// Row `i` of the running orthogonal matrix is sent to `x_i` by the reflection in
/// the hyperplane orthogonal to `r_i - x_i`; earlier rows are orthogonal to that
/// vector and stay fixed. When `r_i = -x_i` this is the reflection along `r_i`.
pub fn orthogonal_complete_counted(x: &RatMatrix) -> Result<(RatMatrix, usize)> {
    let (m, n) = (x.rows(), x.cols());
    if m > n || x.gram_rows() != Matrix::identity(m) {
        return Err(Error::Precondition("rows are not orthonormal".into()));
    }
    // Rows are kept as integer numerators over one denominator per row; the
    // reflections then need only integer dot products.
    let mut rows: Vec<ScaledRow> = (0..n)
        .map(|i| {
            let mut num = vec![BigInt::zero(); n];
            num[i] = BigInt::one();
            ScaledRow { num, den: BigInt::one() }
        })
        .collect();
    let mut reflections = 0;
    for i in 0..m {
        let target = ScaledRow::from_rats(x.row(i));
        // v is a positive multiple of r_i - x_i.
        let mut v: Vec<BigInt> = rows[i]
            .num
            .iter()
            .zip(&target.num)
            .map(|(a, b)| a * &target.den - b * &rows[i].den)
            .collect();
        let content = v.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e));
        if content.is_zero() {
            continue;
        }
        for e in &mut v {
            *e /= &content;
        }
        let vv = int_dot(&v, &v);
        for row in &mut rows {
            let t = int_dot(&row.num, &v);
            if t.is_zero() {
                continue;
            }
            let two_t = t * 2u8;
            for (e, vj) in row.num.iter_mut().zip(&v) {
                *e = &*e * &vv - &two_t * vj;
            }
            row.den *= &vv;
            row.normalize();
        }
        reflections += 1;
    }
    let r = Matrix::from_rows(rows.into_iter().map(ScaledRow::into_rats).collect()).expect("square");
    debug_assert!((0..m).all(|i| r.row(i) == x.row(i)));
    Ok((r, reflections))
}

/// `num / den` entrywise, `den > 0`.
struct ScaledRow {
    num: Vec<BigInt>,
    den: BigInt,
}

impl ScaledRow {
    fn from_rats(row: &[BigRational]) -> Self {
        let den = common_denominator(row);
        let num = row.iter().map(|e| e.numer() * (&den / e.denom())).collect();
        Self { num, den }
    }

    fn normalize(&mut self) {
        let mut g = self.den.clone();
        for e in &self.num {
            if g.is_one() {
                return;
            }
            g = g.gcd(e);
        }
        if !g.is_one() {
            for e in &mut self.num {
                *e /= &g;
            }
            self.den /= &g;
        }
    }

    fn into_rats(self) -> RatVector {
        self.num.into_iter().map(|e| BigRational::new(e, self.den.clone())).collect()
    }
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

pub fn orthogonal_complete(x: &RatMatrix) -> Result<RatMatrix> {
    Ok(orthogonal_complete_counted(x)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::matrix::rat_matrix;

    #[test]
    fn completion_examples() {
        let y = orthogonal_complete(&rat_matrix(&[&[(1, 1), (0, 1)]])).unwrap();
        assert_eq!(y, Matrix::identity(2));
        let y = orthogonal_complete(&rat_matrix(&[&[(3, 5), (4, 5)]])).unwrap();
        assert_eq!(y, rat_matrix(&[&[(3, 5), (4, 5)], &[(4, 5), (-3, 5)]]));
        let y = orthogonal_complete(&rat_matrix(&[&[(0, 1), (1, 1)]])).unwrap();
        assert_eq!(y, rat_matrix(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]));
    }

    #[test]
    fn antipodal_row() {
        let (y, k) = orthogonal_complete_counted(&rat_matrix(&[&[(-1, 1), (0, 1), (0, 1)]])).unwrap();
        assert_eq!(k, 1);
        assert_eq!(y.gram_rows(), Matrix::identity(3));
        assert_eq!(y.row(0), rat_matrix(&[&[(-1, 1), (0, 1), (0, 1)]]).row(0));
    }

    #[test]
    fn rejects_non_orthonormal() {
        assert!(orthogonal_complete(&rat_matrix(&[&[(1, 1), (1, 1)]])).is_err());
    }
}

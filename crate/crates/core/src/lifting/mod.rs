//! Lattice lifting: every full-rank lattice `G Z^m` is, up to the scale `s_total`,
//! the image of `Z^n` under an orthogonal projection, i.e. the projection of a
//! rotated cubic lattice `Y Z^n`.
//!
//! Pipeline: `s = m |G|_max + 1`, `A = s^2 G^{-1} G^{-T} - I` (positive definite),
//! `A = L L^T` by a Waring decomposition, `f` the common denominator of `L`,
//! `f^2 - 1 = sum b_j^2`, `L'' = [b_1 I | ... | b_p I | f L]`, `X = [G | G L'']`
//! with `X X^T = (s f)^2 I`, and `Y` an orthogonal completion of `X / (s f)`.

pub mod orthogonal;
pub mod quadratic;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::linalg::{det_int, inverse};
use crate::exactlinalg::matrix::{common_denominator, max_abs, to_rat, IntMatrix, IntVector, Matrix, RatMatrix};
use crate::exactlinalg::normal_form::is_saturated;
use crate::lattices::{cvp_exact_with_guard, CvpInstance, SldpInstance};

pub use orthogonal::{orthogonal_complete, orthogonal_complete_counted};
pub use quadratic::{lagrange_diagonalize, sum_of_squares, waring_decompose, waring_decompose_detailed, Waring};

/// Result of [`lift_lattice`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftResult {
    pub n: usize,
    pub m: usize,
    #[serde(with = "crate::exactlinalg::json::int")]
    pub s_total: BigInt,
    /// Orthogonal `n x n` matrix; its columns are the lifted basis.
    #[serde(rename = "Y")]
    pub y: RatMatrix,
    #[serde(with = "crate::exactlinalg::json::int")]
    pub s: BigInt,
    #[serde(with = "crate::exactlinalg::json::int")]
    pub f: BigInt,
    /// Number of scalar blocks `b_j I`.
    pub p: usize,
    /// Number of Waring vectors.
    pub waring_terms: usize,
    /// `L''`, so that `X = [G | G L'']`.
    pub l2: IntMatrix,
}

impl LiftResult {
    /// First `m` rows of `Y`, scaled by `s_total`; equals `X`.
    pub fn scaled_projection(&self) -> RatMatrix {
        let s = BigRational::from_integer(self.s_total.clone());
        self.y.select_rows(0..self.m).map(|x| x * &s)
    }

    /// `[I_m | L'']`.
    pub fn eutactic_frame(&self) -> IntMatrix {
        Matrix::identity(self.m).hstack(&self.l2).expect("same row count")
    }
}

/// Whether `(G L)(G L)^T = s^2 I` and `L` is right-invertible over the integers.
pub fn eutactic_check(g: &IntMatrix, l: &IntMatrix, s: &BigInt) -> Result<bool> {
    if g.cols() != l.rows() {
        return Err(Error::DimensionMismatch("G and L do not compose".into()));
    }
    let gl = g.try_mul(l)?;
    let target: IntMatrix = Matrix::identity(g.rows()).scale(&(s * s));
    Ok(gl.gram_rows() == target && is_saturated(l))
}

/// Lifts the lattice spanned by the columns of the nonsingular integer matrix `g`.
pub fn lift_lattice(g: &IntMatrix) -> Result<LiftResult> {
    if !g.is_square() {
        return Err(Error::DimensionMismatch("G must be square".into()));
    }
    if det_int(g)?.is_zero() {
        return Err(Error::Singular);
    }
    let m = g.rows();
    let s = BigInt::from(m) * max_abs(g) + 1;
    let gr = to_rat(g);
    let ginv = inverse(&gr)?;
    let s2 = BigRational::from_integer(&s * &s);
    let a = &(&ginv * &ginv.transpose()).scale(&s2) - &Matrix::identity(m);
    let waring = waring_decompose_detailed(&a)?;
    let ls = waring.vectors;
    let f = common_denominator(ls.iter().flatten());
    let fr = BigRational::from_integer(f.clone());
    let bs = sum_of_squares(&(&f * &f - 1))?;
    let p = bs.len();
    let big_n = ls.len();
    let width = p * m + big_n;
    let mut l2: IntMatrix = Matrix::zeros(m, width);
    for (j, b) in bs.iter().enumerate() {
        for i in 0..m {
            l2[(i, j * m + i)] = b.clone();
        }
    }
    for (k, l) in ls.iter().enumerate() {
        for i in 0..m {
            l2[(i, p * m + k)] = (&l[i] * &fr).to_integer();
        }
    }
    let x = g.hstack(&g.try_mul(&l2)?)?;
    let s_total: BigInt = &s * &f;
    let st = BigRational::from_integer(s_total.clone());
    let (y, _) = orthogonal_complete_counted(&to_rat(&x).map(|v| v / &st))?;
    Ok(LiftResult {
        n: m + width,
        m,
        s_total,
        y,
        s,
        f,
        p,
        waring_terms: big_n,
        l2,
    })
}

/// When to answer a CVP instance by enumeration instead of reducing it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReductionPolicy {
    /// Solve exactly when `m` is at most this value. `None` always reduces.
    pub exact_up_to: Option<usize>,
}

/// Outcome of [`cvp_to_sldp`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CvpReduction {
    Exact(BigRational),
    Reduced {
        s_total: BigInt,
        instance: SldpInstance,
        lift: Box<LiftResult>,
    },
}

/// Primitive integer multiple of a rational row.
fn primitive_row(row: &[BigRational]) -> IntVector {
    let den = common_denominator(row);
    let ints: IntVector = row
        .iter()
        .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|v| v / &g).collect()
    }
}

/// Reduces CVP for `G Z^m` to SLDP in dimension `n`: with `Y` from the lift,
/// `dist(t, G Z^m) = s_total dist(t' + U, Z^n)` where `t' = Y^T (t, 0) / s_total`
/// and `U` is spanned by rows `m+1..n` of `Y`.
pub fn cvp_to_sldp(inst: &CvpInstance, policy: ReductionPolicy) -> Result<CvpReduction> {
    let m = inst.dim();
    if policy.exact_up_to.is_some_and(|k| m <= k) {
        return Ok(CvpReduction::Exact(cvp_exact_with_guard(inst, m)?.dist_sq));
    }
    let lift = lift_lattice(&inst.g)?;
    let n = lift.n;
    let st = BigRational::from_integer(lift.s_total.clone());
    let t_prime: Vec<BigRational> = (0..n)
        .map(|j| (0..m).map(|i| &lift.y[(i, j)] * &inst.t[i]).sum::<BigRational>() / &st)
        .collect();
    let u_basis: Vec<IntVector> = (m..n).map(|i| primitive_row(lift.y.row(i))).collect();
    let instance = SldpInstance::new(t_prime, u_basis)?;
    Ok(CvpReduction::Reduced {
        s_total: lift.s_total.clone(),
        instance,
        lift: Box::new(lift),
    })
}

/// Column lattice of an integral-valued rational matrix, as an integer matrix.
pub fn integral_part(m: &RatMatrix) -> Result<IntMatrix> {
    if m.entries().iter().any(|x| !x.is_integer()) {
        return Err(Error::Precondition("matrix has non-integral entries".into()));
    }
    Ok(m.map(|x| x.to_integer()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::matrix::{int_matrix, rat};
    use crate::exactlinalg::normal_form::same_column_lattice;
    use crate::lattices::{cvp_exact, sldp_exact};

    fn check_lift(g: &IntMatrix) -> LiftResult {
        let r = lift_lattice(g).unwrap();
        assert_eq!(r.y.gram_rows(), Matrix::identity(r.n));
        let x = integral_part(&r.scaled_projection()).unwrap();
        assert!(same_column_lattice(&x, g));
        assert!(eutactic_check(g, &r.eutactic_frame(), &r.s_total).unwrap());
        r
    }

    #[test]
    fn lift_unit() {
        let r = check_lift(&int_matrix(&[&[1]]));
        assert_eq!((r.n, r.s_total.clone(), r.p, r.f.clone()), (4, BigInt::from(2), 0, BigInt::one()));
        assert_eq!(integral_part(&r.scaled_projection()).unwrap(), int_matrix(&[&[1, 1, 1, 1]]));
    }

    #[test]
    fn lift_two() {
        let r = check_lift(&int_matrix(&[&[2]]));
        assert_eq!((r.n, r.s_total.clone(), r.p), (6, BigInt::from(6), 3));
        let mut x: Vec<BigInt> = integral_part(&r.scaled_projection()).unwrap().row(0).to_vec();
        x.sort();
        assert_eq!(x, [2, 2, 2, 2, 2, 4].map(BigInt::from).to_vec());
    }

    #[test]
    fn lift_identity_and_skew() {
        check_lift(&Matrix::identity(2));
        check_lift(&int_matrix(&[&[3, -1], &[2, 5]]));
    }

    #[test]
    fn eutactic_examples() {
        let g = int_matrix(&[&[1]]);
        assert!(!eutactic_check(&g, &int_matrix(&[&[1, 1, 1]]), &BigInt::from(2)).unwrap());
        assert!(eutactic_check(&g, &int_matrix(&[&[1, 1, 1, 1]]), &BigInt::from(2)).unwrap());
        assert!(eutactic_check(&Matrix::identity(2), &Matrix::identity(2), &BigInt::one()).unwrap());
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(lift_lattice(&int_matrix(&[&[1, 2], &[2, 4]])), Err(Error::Singular));
    }

    fn check_reduction(g: IntMatrix, t: Vec<BigRational>) {
        let inst = CvpInstance::new(g, t).unwrap();
        let d = cvp_exact(&inst).unwrap().dist_sq;
        let CvpReduction::Reduced { s_total, instance, .. } = cvp_to_sldp(&inst, ReductionPolicy::default()).unwrap()
        else {
            panic!("expected a reduction");
        };
        let d2 = sldp_exact(&instance).unwrap();
        assert_eq!(d, BigRational::from_integer(&s_total * &s_total) * d2);
    }

    #[test]
    fn reduction_preserves_distance() {
        check_reduction(int_matrix(&[&[1]]), vec![rat(3, 10)]);
        check_reduction(int_matrix(&[&[1]]), vec![rat(4, 1)]);
        check_reduction(Matrix::identity(2), vec![rat(1, 2), rat(1, 2)]);
        check_reduction(int_matrix(&[&[2, 1], &[-1, 3]]), vec![rat(1, 3), rat(7, 5)]);
    }

    #[test]
    fn reduction_exact_branch() {
        let inst = CvpInstance::new(int_matrix(&[&[1]]), vec![rat(3, 10)]).unwrap();
        let r = cvp_to_sldp(&inst, ReductionPolicy { exact_up_to: Some(3) }).unwrap();
        assert_eq!(r, CvpReduction::Exact(rat(9, 100)));
    }
}

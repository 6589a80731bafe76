//! Distance from an affine subspace `t + U` to the integer lattice.
//!
//! With `W` an integer basis of the saturated lattice `Z^n ∩ U^⊥`, the orthogonal
//! projection `P` onto `U^⊥` maps `Z^n` onto the lattice with basis
//! `b_i = W^T (W W^T)^{-1} e_i`, because `W Z^n = Z^k`. In these coordinates the
//! Gram matrix is `Q = (W W^T)^{-1}` and `P t` has coordinates `W t`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cvp::{babai_reduced, closest_gram, max_enum_dim, quad_dist};
use super::{Backend, DistanceEstimate, Lattice, SldpInstance};
use crate::error::{Error, Result};
use crate::exactlinalg::linalg::inverse;
use crate::exactlinalg::matrix::{
    dist_to_int_sq, round_half_up, to_rat, IntMatrix, IntVector, Matrix, RatMatrix, RatVector,
};
use crate::exactlinalg::normal_form::{basis_with_preimages, kernel_lattice_basis, solve_integer_rat};
use crate::exactlinalg::numeric::{exact_sqrt, pow2, sqrt_upper, SQRT_BITS};
use crate::exactlinalg::spectral::{sigma_min_2approx, singular_brackets};

/// Certificate of proximity: `u in U` and `alpha in Z^n` with `t + u - alpha` short.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SldpWitness {
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub u: RatVector,
    #[serde(with = "crate::exactlinalg::json::int_vec")]
    pub alpha: IntVector,
}

impl SldpWitness {
    /// `|t + u - alpha|^2`.
    pub fn residual_sq(&self, t: &[BigRational]) -> BigRational {
        t.iter()
            .zip(&self.u)
            .zip(&self.alpha)
            .map(|((ti, ui), ai)| {
                let r = ti + ui - BigRational::from_integer(ai.clone());
                &r * &r
            })
            .sum()
    }
}

/// The lattice `P(Z^n)` in invariant coordinates.
#[derive(Clone, Debug)]
pub struct ProjectedLattice {
    /// Rows form a basis of `Z^n ∩ U^⊥`; `W Z^n = Z^k`.
    pub w: IntMatrix,
    /// Gram matrix `(W W^T)^{-1}` of the projected basis.
    pub q: RatMatrix,
    /// Rows `a_i in Z^n` with `W a_i = e_i`, so `P a_i = b_i`.
    pub preimages: IntMatrix,
    pub n: usize,
}

impl ProjectedLattice {
    pub fn rank(&self) -> usize {
        self.w.rows()
    }

    /// Coordinates `W t` of the projected target.
    pub fn coords(&self, t: &[BigRational]) -> Result<RatVector> {
        to_rat(&self.w).mul_vec(t)
    }

    /// Ambient generators `b_i` as the columns of an `n x k` matrix.
    pub fn generators(&self) -> RatMatrix {
        &to_rat(&self.w).transpose() * &self.q
    }

    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(self.generators())
    }

    /// Integer point `sum z_i a_i`.
    pub fn lift(&self, z: &[BigInt]) -> IntVector {
        let mut alpha = vec![BigInt::zero(); self.n];
        for (zi, row) in z.iter().zip(self.preimages.row_iter()) {
            if zi.is_zero() {
                continue;
            }
            for (a, r) in alpha.iter_mut().zip(row) {
                *a += zi * r;
            }
        }
        alpha
    }

    /// Witness for the lattice point with coordinates `z` and target `t`:
    /// `alpha = sum z_i a_i` and `u = (I - P)(alpha - t)`.
    pub fn witness(&self, t: &[BigRational], y: &[BigRational], z: &[BigInt]) -> Result<SldpWitness> {
        let alpha = self.lift(z);
        let diff: RatVector = z.iter().zip(y).map(|(a, b)| BigRational::from_integer(a.clone()) - b).collect();
        let p_part = to_rat(&self.w).transpose().mul_vec(&self.q.mul_vec(&diff)?)?;
        let u = alpha
            .iter()
            .zip(t)
            .zip(&p_part)
            .map(|((a, ti), p)| BigRational::from_integer(a.clone()) - ti - p)
            .collect();
        Ok(SldpWitness { u, alpha })
    }
}

/// Basis of `P(Z^n)` for `P` the orthogonal projection onto the complement of the
/// span of `u_basis` (rows), with integer preimages of the basis vectors.
pub fn projected_lattice_basis(u: &IntMatrix) -> Result<ProjectedLattice> {
    let n = u.cols();
    let w = if u.rows() == 0 {
        Matrix::identity(n)
    } else {
        kernel_lattice_basis(u)
    };
    let k = w.rows();
    if k == 0 {
        return Ok(ProjectedLattice {
            w,
            q: Matrix::empty(0),
            preimages: Matrix::empty(n),
            n,
        });
    }
    let q = inverse(&to_rat(&w.gram_rows()))?;
    let (basis, pre) = basis_with_preimages(&w.transpose());
    if basis != Matrix::identity(k) {
        return Err(Error::Precondition("invariant basis is not saturated".into()));
    }
    Ok(ProjectedLattice { w, q, preimages: pre, n })
}

fn sqrt_estimate(d_sq: &BigRational) -> BigRational {
    sqrt_upper(d_sq, SQRT_BITS)
}

/// Relative slack of a directed square root.
fn sqrt_slack() -> BigRational {
    BigRational::one() + pow2(-(SQRT_BITS as i64))
}

fn exact_gamma(d_sq: &BigRational) -> BigRational {
    if exact_sqrt(d_sq).is_some() {
        BigRational::one()
    } else {
        sqrt_slack()
    }
}

/// Exact squared distance and a witness attaining it, refusing ranks above `max_dim`.
pub fn sldp_exact_with_guard(inst: &SldpInstance, max_dim: usize) -> Result<(BigRational, SldpWitness)> {
    let pl = projected_lattice_basis(&inst.u_matrix())?;
    let y = pl.coords(&inst.t)?;
    let (z, d) = closest_gram(&pl.q, &y, max_dim)?;
    let wit = pl.witness(&inst.t, &y, &z)?;
    Ok((d, wit))
}

/// Exact squared distance `dist(t + U, Z^n)^2`.
pub fn sldp_exact(inst: &SldpInstance) -> Result<BigRational> {
    Ok(sldp_exact_with_guard(inst, max_enum_dim())?.0)
}

/// Rounding in invariant coordinates: `D = 2 dist(W t, Z^k) / D_sigma` with
/// `D_sigma` a 2-approximation of `sigma_min(W)`. Factor `2 sigma_max / sigma_min`.
pub fn sldp_h_based(inst: &SldpInstance) -> Result<(DistanceEstimate, SldpWitness)> {
    let pl = projected_lattice_basis(&inst.u_matrix())?;
    let y = pl.coords(&inst.t)?;
    let k = pl.rank();
    if k == 0 {
        let wit = pl.witness(&inst.t, &y, &[])?;
        return Ok((DistanceEstimate::zero(), wit));
    }
    let beta: IntVector = y.iter().map(round_half_up).collect();
    let dist_sq: BigRational = y.iter().map(dist_to_int_sq).sum();
    let wit = pl.witness(&inst.t, &y, &beta)?;
    if dist_sq.is_zero() {
        return Ok((DistanceEstimate::zero(), wit));
    }
    let ds = sigma_min_2approx(&pl.w)?;
    let d_sq = dist_sq * BigRational::from_integer(4.into()) / (&ds * &ds);
    let (smin_lo, _, _, smax_hi) = singular_brackets(&pl.w, &pow2(-20))?;
    let gamma = BigRational::from_integer(2.into()) * smax_hi / smin_lo;
    let squared_exact = (k == inst.dim()).then(|| quad_dist(&pl.q, &y, &beta));
    Ok((
        DistanceEstimate {
            d: sqrt_estimate(&d_sq),
            gamma,
            squared_exact,
        },
        wit,
    ))
}

/// Rational upper bound on `2^(n/2 + 1)`.
pub fn lll_gamma(n: usize) -> BigRational {
    let sq = pow2(n as i64 + 2);
    sqrt_upper(&sq, SQRT_BITS)
}

/// LLL and Babai on the projected lattice. Factor `2^(n/2 + 1)`.
pub fn sldp_lll(inst: &SldpInstance) -> Result<(DistanceEstimate, SldpWitness)> {
    let pl = projected_lattice_basis(&inst.u_matrix())?;
    let y = pl.coords(&inst.t)?;
    if pl.rank() == 0 {
        let wit = pl.witness(&inst.t, &y, &[])?;
        return Ok((DistanceEstimate::zero(), wit));
    }
    let (z, d_sq) = babai_reduced(&pl.q, &y)?;
    let wit = pl.witness(&inst.t, &y, &z)?;
    if d_sq.is_zero() {
        return Ok((DistanceEstimate::zero(), wit));
    }
    let squared_exact = (pl.rank() == inst.dim()).then(|| d_sq.clone());
    Ok((
        DistanceEstimate {
            d: sqrt_estimate(&d_sq),
            gamma: lll_gamma(inst.dim()),
            squared_exact,
        },
        wit,
    ))
}

/// Upper bound on the factor `gamma` that `backend` can report for subspace `U`
/// in dimension `n`, independent of the target.
pub fn backend_gamma(u_basis: &[IntVector], n: usize, backend: Backend) -> Result<BigRational> {
    match backend {
        Backend::Exact => Ok(sqrt_slack()),
        Backend::Lll => Ok(lll_gamma(n)),
        Backend::HBased => {
            let u = if u_basis.is_empty() { Matrix::empty(n) } else { Matrix::from_rows(u_basis.to_vec())? };
            let pl = projected_lattice_basis(&u)?;
            if pl.rank() == 0 {
                return Ok(BigRational::one());
            }
            let (smin_lo, _, _, smax_hi) = singular_brackets(&pl.w, &pow2(-20))?;
            Ok(BigRational::from_integer(2.into()) * smax_hi / smin_lo)
        }
    }
}

/// Dispatches on the backend. The exact backend honours `max_dim`.
pub fn sldp(inst: &SldpInstance, backend: Backend, max_dim: usize) -> Result<(DistanceEstimate, SldpWitness)> {
    match backend {
        Backend::Exact => {
            let (d_sq, wit) = sldp_exact_with_guard(inst, max_dim)?;
            Ok((
                DistanceEstimate {
                    d: sqrt_estimate(&d_sq),
                    gamma: exact_gamma(&d_sq),
                    squared_exact: Some(d_sq),
                },
                wit,
            ))
        }
        Backend::HBased => sldp_h_based(inst),
        Backend::Lll => sldp_lll(inst),
    }
}

/// Whether `(t + U) ∩ Z^n` is nonempty, decided through the Smith form of `W`.
pub fn affine_lattice_nonempty(t: &[BigRational], u_basis: &[IntVector]) -> Result<bool> {
    let inst = SldpInstance::new(t.to_vec(), u_basis.to_vec())?;
    let pl = projected_lattice_basis(&inst.u_matrix())?;
    if pl.rank() == 0 {
        return Ok(true);
    }
    let y = pl.coords(t)?;
    Ok(solve_integer_rat(&pl.w, &y)?.is_some())
}

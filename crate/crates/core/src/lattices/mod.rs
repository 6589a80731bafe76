//! Lattices, closest-vector search and subspace-to-lattice distances.
//!
//! Internally every lattice is handled through its Gram matrix in basis
//! coordinates, which makes LLL, Babai and enumeration independent of the
//! ambient dimension.

pub mod cvp;
pub mod lll;
pub mod sldp;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::linalg::{det_int, is_independent, rank_int, solve};
use crate::exactlinalg::matrix::{to_rat, IntMatrix, IntVector, Matrix, RatMatrix, RatVector};

pub use cvp::{max_enum_dim, with_max_enum_dim, DEFAULT_MAX_ENUM_DIM, MAX_ENUM_DIM_ENV};
pub use sldp::{
    affine_lattice_nonempty, backend_gamma, projected_lattice_basis, sldp, sldp_exact, sldp_h_based, sldp_lll, ProjectedLattice,
    SldpWitness,
};

/// Lattice generated by the (independent) columns of a rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    generators: RatMatrix,
}

impl Lattice {
    pub fn new(generators: RatMatrix) -> Result<Self> {
        if !is_independent(&generators.transpose()) {
            return Err(Error::DependentVectors);
        }
        Ok(Self { generators })
    }

    pub fn generators(&self) -> &RatMatrix {
        &self.generators
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators.rows()
    }

    pub fn rank(&self) -> usize {
        self.generators.cols()
    }

    /// Gram matrix of the generators.
    pub fn gram(&self) -> RatMatrix {
        self.generators.transpose().gram_rows()
    }
}

/// Closest-vector instance: lattice `G Z^m` (columns of `G`) and a target `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCvp")]
pub struct CvpInstance {
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub t: RatVector,
    #[serde(rename = "G")]
    pub g: IntMatrix,
}

#[derive(Deserialize)]
struct RawCvp {
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    t: RatVector,
    #[serde(rename = "G")]
    g: IntMatrix,
}

impl TryFrom<RawCvp> for CvpInstance {
    type Error = Error;
    fn try_from(r: RawCvp) -> Result<Self> {
        CvpInstance::new(r.g, r.t)
    }
}

impl CvpInstance {
    pub fn new(g: IntMatrix, t: RatVector) -> Result<Self> {
        if !g.is_square() || g.rows() != t.len() {
            return Err(Error::DimensionMismatch(format!(
                "G is {}x{}, target has length {}",
                g.rows(),
                g.cols(),
                t.len()
            )));
        }
        if det_int(&g)?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Self { t, g })
    }

    pub fn dim(&self) -> usize {
        self.t.len()
    }

    /// Gram matrix `G^T G` and target coordinates `G^{-1} t`.
    pub fn gram_coords(&self) -> Result<(RatMatrix, RatVector)> {
        let g = to_rat(&self.g);
        let y = solve(&g, &self.t)?;
        Ok((g.transpose().gram_rows(), y))
    }
}

/// Distance from the affine subspace `t + U` to `Z^n`, with `U` spanned by `u_basis`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSldp")]
pub struct SldpInstance {
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub t: RatVector,
    #[serde(rename = "U", with = "crate::exactlinalg::json::int_vecs")]
    pub u_basis: Vec<IntVector>,
}

#[derive(Deserialize)]
struct RawSldp {
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    t: RatVector,
    #[serde(rename = "U", with = "crate::exactlinalg::json::int_vecs", default)]
    u_basis: Vec<IntVector>,
}

impl TryFrom<RawSldp> for SldpInstance {
    type Error = Error;
    fn try_from(r: RawSldp) -> Result<Self> {
        SldpInstance::new(r.t, r.u_basis)
    }
}

impl SldpInstance {
    pub fn new(t: RatVector, u_basis: Vec<IntVector>) -> Result<Self> {
        let n = t.len();
        if u_basis.iter().any(|u| u.len() != n) {
            return Err(Error::DimensionMismatch("subspace generators must match the target length".into()));
        }
        if !u_basis.is_empty() {
            let m = Matrix::from_rows(u_basis.clone())?;
            if rank_int(&m) != u_basis.len() {
                return Err(Error::DependentVectors);
            }
        }
        Ok(Self { t, u_basis })
    }

    pub fn dim(&self) -> usize {
        self.t.len()
    }

    /// Generators of `U` as the rows of a matrix (possibly with zero rows).
    pub fn u_matrix(&self) -> IntMatrix {
        if self.u_basis.is_empty() {
            Matrix::empty(self.dim())
        } else {
            Matrix::from_rows(self.u_basis.clone()).expect("validated")
        }
    }
}

/// A rational `D` with `d <= D <= gamma d` for the true distance `d`.
///
/// `squared_exact` is the exact value of `d^2` when the backend determines it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    #[serde(rename = "D", with = "crate::exactlinalg::json::rat")]
    pub d: BigRational,
    #[serde(with = "crate::exactlinalg::json::rat")]
    pub gamma: BigRational,
    #[serde(with = "crate::exactlinalg::json::opt_rat", default, skip_serializing_if = "Option::is_none")]
    pub squared_exact: Option<BigRational>,
}

impl DistanceEstimate {
    pub fn zero() -> Self {
        Self {
            d: BigRational::zero(),
            gamma: BigRational::one(),
            squared_exact: Some(BigRational::zero()),
        }
    }

    /// Whether `d <= D <= gamma d` holds for the distance `d` with `d^2 = d_sq`.
    pub fn sandwiches_squared(&self, d_sq: &BigRational) -> bool {
        let dd = &self.d * &self.d;
        let gg = &self.gamma * &self.gamma;
        *d_sq <= dd && dd <= gg * d_sq
    }
}

/// Which SLDP algorithm to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Exact enumeration (exponential in the lattice rank, guarded).
    Exact,
    /// Rounding in the invariant coordinates, factor `2 sigma_max / sigma_min`.
    #[serde(rename = "h")]
    HBased,
    /// LLL plus Babai, factor `2^(n/2 + 1)`.
    Lll,
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "h" | "h_based" | "h-based" => Ok(Backend::HBased),
            "lll" => Ok(Backend::Lll),
            other => Err(Error::Parse(format!("unknown backend {other:?}"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::HBased => "h",
            Backend::Lll => "lll",
        })
    }
}

/// Closest lattice point with its coefficients in the input basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvpSolution {
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub point: RatVector,
    #[serde(with = "crate::exactlinalg::json::int_vec")]
    pub coeffs: IntVector,
    #[serde(with = "crate::exactlinalg::json::rat")]
    pub dist_sq: BigRational,
}

/// LLL-reduced generators (columns) of the same lattice.
pub fn lll_reduce(g: &RatMatrix) -> Result<RatMatrix> {
    let lat = Lattice::new(g.clone())?;
    let (t, _) = lll::lll_gram(&lat.gram())?;
    Ok(g * &to_rat(&t).transpose())
}

/// Babai's nearest plane on the given (ideally LLL-reduced) generators.
pub fn babai_nearest_plane(g: &RatMatrix, t: &[BigRational]) -> Result<RatVector> {
    if g.rows() != t.len() {
        return Err(Error::DimensionMismatch("target length".into()));
    }
    let lat = Lattice::new(g.clone())?;
    let q = lat.gram();
    let y = solve(&q, &g.transpose().mul_vec(t)?)?;
    let (z, _) = cvp::babai_gram(&q, &y)?;
    g.mul_vec(&z.into_iter().map(BigRational::from_integer).collect::<Vec<_>>())
}

/// Exact closest vector, refusing ranks above `max_dim`.
pub fn cvp_exact_with_guard(inst: &CvpInstance, max_dim: usize) -> Result<CvpSolution> {
    let (q, y) = inst.gram_coords()?;
    let (z, dist_sq) = cvp::closest_gram(&q, &y, max_dim)?;
    let zr: RatVector = z.iter().cloned().map(BigRational::from_integer).collect();
    let point = to_rat(&inst.g).mul_vec(&zr)?;
    Ok(CvpSolution {
        point,
        coeffs: z,
        dist_sq,
    })
}

/// Exact closest vector with the default (environment-overridable) guard.
pub fn cvp_exact(inst: &CvpInstance) -> Result<CvpSolution> {
    cvp_exact_with_guard(inst, max_enum_dim())
}

/// Squared distance from `t` to the lattice spanned by the columns of `g`, for
/// targets outside the span as well.
pub fn lattice_dist_sq(g: &RatMatrix, t: &[BigRational], max_dim: usize) -> Result<BigRational> {
    let lat = Lattice::new(g.clone())?;
    let q = lat.gram();
    let y = solve(&q, &g.transpose().mul_vec(t)?)?;
    let (_, d) = cvp::closest_gram(&q, &y, max_dim)?;
    let proj = g.mul_vec(&y)?;
    let perp: BigRational = t.iter().zip(&proj).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(d + perp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::matrix::{int_matrix, rat, rat_matrix};
    use crate::exactlinalg::normal_form::same_column_lattice;

    #[test]
    fn lll_identity_and_skew() {
        let i2: RatMatrix = Matrix::identity(2);
        assert_eq!(lll_reduce(&i2).unwrap(), i2);
        let g = rat_matrix(&[&[(201, 1), (200, 1)], &[(1, 1), (1, 1)]]);
        let r = lll_reduce(&g).unwrap();
        let ri = r.map(|x| x.to_integer());
        assert!(same_column_lattice(&ri, &int_matrix(&[&[201, 200], &[1, 1]])));
    }

    #[test]
    fn lll_first_vector_short() {
        let g = rat_matrix(&[&[(1, 1), (0, 1)], &[(10, 1), (1, 1)]]);
        let r = lll_reduce(&g).unwrap();
        let n0: BigRational = r.col(0).iter().map(|x| x * x).sum();
        // Shortest vector of this unimodular lattice has norm 1.
        assert!(n0 <= rat(2, 1));
    }

    #[test]
    fn babai_rounding() {
        let i2: RatMatrix = Matrix::identity(2);
        let p = babai_nearest_plane(&i2, &[rat(2, 5), rat(3, 5)]).unwrap();
        assert_eq!(p, vec![rat(0, 1), rat(1, 1)]);
        let p = babai_nearest_plane(&i2, &[rat(3, 1), rat(-2, 1)]).unwrap();
        assert_eq!(p, vec![rat(3, 1), rat(-2, 1)]);
    }

    #[test]
    fn cvp_examples() {
        let s = cvp_exact(&CvpInstance::new(int_matrix(&[&[1]]), vec![rat(3, 10)]).unwrap()).unwrap();
        assert_eq!(s.dist_sq, rat(9, 100));
        assert_eq!(s.point, vec![rat(0, 1)]);
        let s = cvp_exact(&CvpInstance::new(int_matrix(&[&[2, 0], &[0, 3]]), vec![rat(1, 1), rat(1, 1)]).unwrap())
            .unwrap();
        assert_eq!(s.dist_sq, rat(2, 1));
        assert!(s.point == vec![rat(0, 1), rat(0, 1)] || s.point == vec![rat(2, 1), rat(0, 1)]);
        assert_eq!(s.point, vec![rat(0, 1), rat(0, 1)]);
        let s = cvp_exact(&CvpInstance::new(int_matrix(&[&[2, 1], &[0, 3]]), vec![rat(3, 1), rat(3, 1)]).unwrap())
            .unwrap();
        assert_eq!(s.dist_sq, rat(0, 1));
    }

    #[test]
    fn singular_cvp_rejected() {
        assert_eq!(
            CvpInstance::new(int_matrix(&[&[1, 2], &[2, 4]]), vec![rat(0, 1), rat(0, 1)]),
            Err(Error::Singular)
        );
    }
}

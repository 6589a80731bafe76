//! Diagonal torus actions `t · v = (t^{ω_1} v_1, ..., t^{ω_n} v_n)` given by an
//! integer weight matrix, their invariant lattices, and exact orbit equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::linalg::rank;
use crate::exactlinalg::lp::{maximize, LpOutcome};
use crate::exactlinalg::matrix::{bit_length, to_rat, IntMatrix, IntVector, Matrix, RatMatrix, RatVector};
use crate::exactlinalg::normal_form::{is_saturated, kernel_lattice_basis, row_lattice_basis};
use crate::exactlinalg::{CertifiedComplex, GaussianRational};
use crate::logspace::real::{bits_for, cos_sin_turns, exp, Interval};

/// Action of `(C^×)^d` on `C^n` with weights the columns of `M` (`d x n`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAction", into = "RawAction")]
pub struct TorusAction {
    m: IntMatrix,
}

#[derive(Serialize, Deserialize)]
struct RawAction {
    #[serde(rename = "M")]
    m: IntMatrix,
}

impl TryFrom<RawAction> for TorusAction {
    type Error = Error;
    fn try_from(r: RawAction) -> Result<Self> {
        Self::new(r.m)
    }
}

impl From<TorusAction> for RawAction {
    fn from(a: TorusAction) -> Self {
        RawAction { m: a.m }
    }
}

impl TorusAction {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if m.rows() == 0 || m.cols() == 0 {
            return Err(Error::DimensionMismatch("weight matrix must be at least 1x1".into()));
        }
        Ok(Self { m })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::new(crate::exactlinalg::matrix::int_matrix(rows))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    /// Rank `d` of the torus.
    pub fn d(&self) -> usize {
        self.m.rows()
    }

    pub fn n(&self) -> usize {
        self.m.cols()
    }

    pub fn weight(&self, j: usize) -> IntVector {
        self.m.col(j)
    }

    pub fn weights(&self) -> Vec<IntVector> {
        (0..self.n()).map(|j| self.weight(j)).collect()
    }

    /// Bit length `B` of the largest weight entry.
    pub fn weight_bits(&self) -> u64 {
        bit_length(&self.m)
    }

    /// Basis of `U = row space of M`, as independent integer rows.
    pub fn u_basis(&self) -> Vec<IntVector> {
        row_lattice_basis(&self.m).to_rows()
    }

    /// Exponent `M^T x` of the action of `e^x` in log coordinates.
    pub fn translate(&self, x: &[BigRational]) -> Result<RatVector> {
        if x.len() != self.d() {
            return Err(Error::DimensionMismatch(format!("group element has {} entries, expected {}", x.len(), self.d())));
        }
        to_rat(&self.m.transpose()).mul_vec(x)
    }

    fn check_vector(&self, v: &[GaussianRational]) -> Result<()> {
        if v.len() != self.n() {
            return Err(Error::DimensionMismatch(format!("vector has {} entries, expected {}", v.len(), self.n())));
        }
        Ok(())
    }
}

/// Rows form a basis of the invariant lattice `{α in Z^n : M α = 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantMatrix {
    #[serde(rename = "H")]
    pub h: IntMatrix,
}

impl InvariantMatrix {
    pub fn k(&self) -> usize {
        self.h.rows()
    }

    pub fn rows(&self) -> Vec<IntVector> {
        self.h.to_rows()
    }
}

pub fn invariant_matrix(action: &TorusAction) -> InvariantMatrix {
    let h = kernel_lattice_basis(action.matrix());
    debug_assert!(is_saturated(&h));
    debug_assert!(action.matrix().try_mul(&h.transpose()).is_ok_and(|p| p.is_zero()));
    InvariantMatrix { h }
}

/// Group element `e^{y + 2πi z}` of `(C^×)^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElement {
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub y: RatVector,
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub z: RatVector,
}

impl GroupElement {
    pub fn identity(d: usize) -> Self {
        Self {
            y: vec![BigRational::zero(); d],
            z: vec![BigRational::zero(); d],
        }
    }
}

/// `t · v` for a torus element with Gaussian rational coordinates, exactly.
pub fn act_rational(action: &TorusAction, t: &[GaussianRational], v: &[GaussianRational]) -> Result<Vec<GaussianRational>> {
    action.check_vector(v)?;
    if t.len() != action.d() {
        return Err(Error::DimensionMismatch("torus element has the wrong length".into()));
    }
    if let Some(i) = t.iter().position(Zero::is_zero) {
        return Err(Error::ZeroComponent { index: i });
    }
    (0..action.n())
        .map(|j| {
            let mut acc = v[j].clone();
            for (i, ti) in t.iter().enumerate() {
                let e = &action.matrix()[(i, j)];
                if !e.is_zero() {
                    acc = &acc * &ti.pow(e)?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// `e^{y + 2πi z} · v` with componentwise relative error at most `eps`.
pub fn act(action: &TorusAction, x: &GroupElement, v: &[GaussianRational], eps: &BigRational) -> Result<Vec<CertifiedComplex>> {
    action.check_vector(v)?;
    if !eps.is_positive() {
        return Err(Error::NonPositivePrecision);
    }
    let rho = action.translate(&x.y)?;
    let phi = action.translate(&x.z)?;
    // Relative error of the product is below 4 · 2^-bits.
    let bits = bits_for(eps) + 3;
    (0..action.n())
        .map(|j| {
            let vj = &v[j];
            if vj.is_zero() {
                if action.weight(j).iter().any(|e| !e.is_zero()) {
                    return Err(Error::ZeroComponent { index: j });
                }
                return Ok(exact_complex(vj));
            }
            let (c, s) = cos_sin_turns(&phi[j], bits + 2);
            let e = exp(&rho[j], bits + 2);
            let (a, b) = (Interval::point(vj.re.clone()), Interval::point(vj.im.clone()));
            let re = e.mul(&c.mul(&a).sub(&s.mul(&b)));
            let im = e.mul(&s.mul(&a).add(&c.mul(&b)));
            Ok(CertifiedComplex {
                re: re.to_certified(),
                im: im.to_certified(),
            })
        })
        .collect()
}

fn exact_complex(v: &GaussianRational) -> CertifiedComplex {
    CertifiedComplex {
        re: crate::exactlinalg::Certified::exact(v.re.clone()),
        im: crate::exactlinalg::Certified::exact(v.im.clone()),
    }
}

fn check_nonzero(v: &[GaussianRational]) -> Result<()> {
    match v.iter().position(Zero::is_zero) {
        Some(i) => Err(Error::ZeroComponent { index: i }),
        None => Ok(()),
    }
}

/// Whether `v^α = w^α` for the Laurent monomial with exponent `α`.
pub fn monomial_equal(v: &[GaussianRational], w: &[GaussianRational], alpha: &[BigInt]) -> Result<bool> {
    if v.len() != w.len() || v.len() != alpha.len() {
        return Err(Error::DimensionMismatch("monomial arguments differ in length".into()));
    }
    check_nonzero(v)?;
    check_nonzero(w)?;
    // Cross-multiply to keep every exponent nonnegative.
    let (mut lhs, mut rhs) = (GaussianRational::one(), GaussianRational::one());
    for ((a, b), e) in v.iter().zip(w).zip(alpha) {
        if e.is_positive() {
            lhs = &lhs * &a.pow(e)?;
            rhs = &rhs * &b.pow(e)?;
        } else if e.is_negative() {
            let k = -e;
            lhs = &lhs * &b.pow(&k)?;
            rhs = &rhs * &a.pow(&k)?;
        }
    }
    Ok(lhs == rhs)
}

/// Equality of the orbits of `v` and `w` under the complex torus.
pub fn orbit_equal_t(action: &TorusAction, v: &[GaussianRational], w: &[GaussianRational]) -> Result<bool> {
    action.check_vector(v)?;
    action.check_vector(w)?;
    check_nonzero(v)?;
    check_nonzero(w)?;
    for alpha in invariant_matrix(action).rows() {
        if !monomial_equal(v, w, &alpha)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality of the orbits under the compact torus: complex orbits agree and all
/// moduli agree.
pub fn orbit_equal_k(action: &TorusAction, v: &[GaussianRational], w: &[GaussianRational]) -> Result<bool> {
    Ok(orbit_equal_t(action, v, w)? && v.iter().zip(w).all(|(a, b)| a.norm_sq() == b.norm_sq()))
}

/// Position of a point relative to the weight polytope `conv(ω_1, ..., ω_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolytopePosition {
    Interior,
    Boundary,
    Outside,
    /// The weights do not affinely span `R^d` and the point lies in their hull,
    /// so interior and boundary are not distinguished.
    Degenerate,
}

/// Whether the weights affinely span `R^d`.
pub fn weights_span_affinely(action: &TorusAction) -> bool {
    let m = to_rat(action.matrix());
    let d = action.d();
    let diffs = Matrix::from_fn(d, action.n() - 1, |i, j| &m[(i, j + 1)] - &m[(i, 0)]);
    action.n() > 1 && rank(&diffs) == d
}

/// Exact classification of `p` against the weight polytope by linear programming.
pub fn point_position(action: &TorusAction, p: &[BigRational]) -> Result<PolytopePosition> {
    let (d, n) = (action.d(), action.n());
    if p.len() != d {
        return Err(Error::DimensionMismatch("point has the wrong dimension".into()));
    }
    // Variables (λ_1..λ_n, s_1..s_n, t): M λ = p, Σ λ = 1, λ_j - s_j - t = 0; maximise t.
    let cols = 2 * n + 1;
    let m = to_rat(action.matrix());
    let mut a: RatMatrix = Matrix::zeros(d + 1 + n, cols);
    let mut b = Vec::with_capacity(d + 1 + n);
    let one = BigRational::one();
    for i in 0..d {
        for j in 0..n {
            a[(i, j)] = m[(i, j)].clone();
        }
        b.push(p[i].clone());
    }
    for j in 0..n {
        a[(d, j)] = one.clone();
    }
    b.push(one.clone());
    for j in 0..n {
        a[(d + 1 + j, j)] = one.clone();
        a[(d + 1 + j, n + j)] = -one.clone();
        a[(d + 1 + j, 2 * n)] = -one.clone();
        b.push(BigRational::zero());
    }
    let mut c = vec![BigRational::zero(); cols];
    c[2 * n] = one;
    let pos = match maximize(&a, &b, &c)? {
        LpOutcome::Infeasible => PolytopePosition::Outside,
        LpOutcome::Unbounded => return Err(Error::Infeasible("unbounded polytope program".into())),
        LpOutcome::Optimal { value, .. } if value.is_positive() => PolytopePosition::Interior,
        LpOutcome::Optimal { .. } => PolytopePosition::Boundary,
    };
    if pos != PolytopePosition::Outside && !weights_span_affinely(action) {
        return Ok(PolytopePosition::Degenerate);
    }
    Ok(pos)
}

pub fn polytope_origin_position(action: &TorusAction) -> Result<PolytopePosition> {
    point_position(action, &vec![BigRational::zero(); action.d()])
}

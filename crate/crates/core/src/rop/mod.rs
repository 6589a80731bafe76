//! Robust orbit-distance approximation in four settings, proximity witnesses,
//! and the reduction chain CVP → SLDP → ROP.
//!
//! The settings are `(T, Δ)`, `(K, Δ)` on exact log-space points, `(T, δ_log)`
//! and `(K, dist)` on vectors with Gaussian-rational entries. The last two are
//! only as good as the caller's [`SepBound`]: it must not exceed the true
//! distance between distinct orbits of the instance.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::linalg::{project_onto_rowspace, solve_any};
use crate::exactlinalg::matrix::{common_denominator, to_rat, vec_sub, IntMatrix, Matrix, RatVector};
use crate::exactlinalg::normal_form::kernel_lattice_basis;
use crate::exactlinalg::numeric::{pow2, sqrt_lower, sqrt_upper, SQRT_BITS};
use crate::exactlinalg::{Certified, GaussianRational};
use crate::lattices::{affine_lattice_nonempty, max_enum_dim, Backend, CvpInstance, DistanceEstimate, SldpInstance};
use crate::lifting::{cvp_to_sldp, CvpReduction, ReductionPolicy};
use crate::logspace::real::pi;
use crate::logspace::{
    delta_metric, delta_orbit_detailed, exp_approx, log_approx, DeltaOrbit, Group, QuotientPoint, DEFAULT_BITS,
};
use crate::torus::{orbit_equal_k, orbit_equal_t, TorusAction};

/// Caller-asserted lower bound on the distance between distinct orbits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SepBound {
    #[serde(with = "crate::exactlinalg::json::rat")]
    eps: BigRational,
    /// Set when the bound was filled in by [`SepBound::default_for`].
    #[serde(default)]
    pub assumed: bool,
}

impl SepBound {
    pub fn new(eps: BigRational) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::NonPositivePrecision);
        }
        Ok(Self { eps, assumed: false })
    }

    /// `2^(-64 (d + n + B + b))` with `B` the weight bit length and `b` the
    /// largest bit length among the numerators and denominators of `v` and `w`.
    pub fn default_for(action: &TorusAction, v: &[GaussianRational], w: &[GaussianRational]) -> Self {
        let b = v
            .iter()
            .chain(w)
            .flat_map(|z| [&z.re, &z.im])
            .map(|x| x.numer().bits().max(x.denom().bits()))
            .max()
            .unwrap_or(0);
        let total = action.d() as u64 + action.n() as u64 + action.weight_bits() + b;
        Self {
            eps: pow2(-64 * total as i64),
            assumed: true,
        }
    }

    pub fn eps(&self) -> &BigRational {
        &self.eps
    }

    pub fn warning(&self) -> Option<String> {
        self.assumed.then(|| {
            format!(
                "no separation bound given; assumed eps = 2^{}, and the result is only valid if distinct orbits are at least that far apart",
                crate::exactlinalg::numeric::floor_log2(&self.eps)
            )
        })
    }
}

/// Group element `e^(y + 2πi z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub y: RatVector,
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub z: RatVector,
}

/// Estimate together with the caveats that apply to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RopAnswer {
    #[serde(flatten)]
    pub estimate: DistanceEstimate,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl RopAnswer {
    fn new(estimate: DistanceEstimate, sep: &SepBound) -> Self {
        Self {
            estimate,
            warnings: sep.warning().into_iter().collect(),
        }
    }
}

fn check_exact(p: &QuotientPoint, q: &QuotientPoint) -> Result<()> {
    if p.is_exact() && q.is_exact() {
        Ok(())
    } else {
        Err(Error::InexactInput)
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `Δ(G∗p, G∗q)` for exact points.
pub fn rop_delta(
    action: &TorusAction,
    p: &QuotientPoint,
    q: &QuotientPoint,
    group: Group,
    backend: Backend,
) -> Result<DistanceEstimate> {
    check_exact(p, q)?;
    Ok(delta_orbit_detailed(action, p, q, group, backend, max_enum_dim())?.estimate)
}

/// Logs of `v` and `w`, each within `kappa / 2`, and the `Δ` estimate between them.
fn approximate_delta(
    action: &TorusAction,
    v: &[GaussianRational],
    w: &[GaussianRational],
    kappa: &BigRational,
    group: Group,
    backend: Backend,
) -> Result<(QuotientPoint, QuotientPoint, DeltaOrbit)> {
    let half = kappa / BigRational::from_integer(2.into());
    let p = log_approx(v, &half)?;
    let q = log_approx(w, &half)?;
    let detail = delta_orbit_detailed(action, &p, &q, group, backend, max_enum_dim())?;
    Ok((p, q, detail))
}

/// `δ_log(O_v, O_w)` for the complex torus.
///
/// With logs accurate to `κ = eps / 2` and distinct orbits at least `eps` apart,
/// the approximate distance is within a factor `3/2` of the true one, so `2 D`
/// is an estimate with factor `3 γ`.
pub fn rop_logdist_t(
    action: &TorusAction,
    v: &[GaussianRational],
    w: &[GaussianRational],
    sep: &SepBound,
    backend: Backend,
) -> Result<RopAnswer> {
    if orbit_equal_t(action, v, w)? {
        return Ok(RopAnswer::new(DistanceEstimate::zero(), sep));
    }
    let kappa = sep.eps() / BigRational::from_integer(2.into());
    let (_, _, detail) = approximate_delta(action, v, w, &kappa, Group::T, backend)?;
    Ok(RopAnswer::new(logdist_from_delta(&detail.estimate), sep))
}

fn logdist_from_delta(est: &DistanceEstimate) -> DistanceEstimate {
    DistanceEstimate {
        d: &est.d * BigRational::from_integer(2.into()),
        gamma: &est.gamma * BigRational::from_integer(3.into()),
        squared_exact: None,
    }
}

/// Rational bounds `r <= min |x_j|` and `max |x_j| <= R` over both vectors.
fn modulus_range(v: &[GaussianRational], w: &[GaussianRational]) -> (BigRational, BigRational) {
    let norms: Vec<BigRational> = v.iter().chain(w).map(GaussianRational::norm_sq).collect();
    let lo = norms.iter().min().cloned().unwrap_or_else(BigRational::one);
    let hi = norms.iter().max().cloned().unwrap_or_else(BigRational::one);
    (sqrt_lower(&lo, SQRT_BITS), sqrt_upper(&hi, SQRT_BITS))
}

/// Euclidean distance between compact-torus orbits.
///
/// Logs are taken to accuracy `κ = eps / (9R)`, which keeps the approximate `Δ`
/// within `(8/9, 10/9)` of the true one; `9 R D / 8` then approximates the
/// orbit distance within `2 R γ / r`.
pub fn rop_dist_k(
    action: &TorusAction,
    v: &[GaussianRational],
    w: &[GaussianRational],
    sep: &SepBound,
    backend: Backend,
) -> Result<RopAnswer> {
    if orbit_equal_k(action, v, w)? {
        return Ok(RopAnswer::new(DistanceEstimate::zero(), sep));
    }
    let (r, big_r) = modulus_range(v, w);
    let kappa = sep.eps() / (BigRational::from_integer(9.into()) * &big_r);
    let (_, _, detail) = approximate_delta(action, v, w, &kappa, Group::K, backend)?;
    let est = detail.estimate;
    let estimate = DistanceEstimate {
        d: &est.d * &big_r * rat(9, 8),
        gamma: &est.gamma * &big_r * BigRational::from_integer(2.into()) / r,
        squared_exact: None,
    };
    Ok(RopAnswer::new(estimate, sep))
}

/// Outcome of [`rop_witness_t`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessOutcome {
    OrbitEqual,
    Found {
        witness: Witness,
        /// Estimate of `δ_log(O_v, O_w)`.
        estimate: RopAnswer,
        /// Enclosure of `Δ(e^x ∗ Log v, Log w)`.
        residual: Certified,
    },
}

/// Group element `e^x` bringing `v` close to `w` in log distance.
///
/// `y` cancels the projection of `ρ - τ` onto `U`; `z` realizes the SLDP
/// witness `u = M^T z` for the angular part.
pub fn rop_witness_t(
    action: &TorusAction,
    v: &[GaussianRational],
    w: &[GaussianRational],
    sep: &SepBound,
    backend: Backend,
) -> Result<WitnessOutcome> {
    if orbit_equal_t(action, v, w)? {
        return Ok(WitnessOutcome::OrbitEqual);
    }
    let kappa = sep.eps() / BigRational::from_integer(2.into());
    let (p, q, detail) = approximate_delta(action, v, w, &kappa, Group::T, backend)?;
    let m = to_rat(action.matrix());
    let mt = m.transpose();
    let u1 = project_onto_rowspace(&m, &vec_sub(&p.rho, &q.rho))?;
    let neg_u1: RatVector = u1.iter().map(|x| -x).collect();
    let y = solve_any(&mt, &neg_u1)?.ok_or_else(|| Error::Infeasible("projection is not in the row space".into()))?;
    let sldp_witness = detail.witness.as_ref().expect("delta_orbit_detailed returns a witness");
    let z = solve_any(&mt, &sldp_witness.u)?
        .ok_or_else(|| Error::Infeasible("SLDP witness is not in the row space".into()))?;
    let moved = p.translate(action, &y, &z)?;
    let residual = delta_metric(&moved, &q)?;
    Ok(WitnessOutcome::Found {
        witness: Witness { y, z },
        estimate: RopAnswer::new(logdist_from_delta(&detail.estimate), sep),
        residual,
    })
}

/// Distance notion on orbits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// `Δ` on log-space points.
    Delta,
    /// `δ_log` on vectors.
    Log,
    /// Euclidean distance on vectors.
    Euclid,
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta" => Ok(Metric::Delta),
            "log" => Ok(Metric::Log),
            "euclid" | "dist" => Ok(Metric::Euclid),
            other => Err(Error::Parse(format!("unknown metric {other:?}"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Delta => "delta",
            Metric::Log => "log",
            Metric::Euclid => "euclid",
        })
    }
}

/// One of `(T, Δ)`, `(K, Δ)`, `(T, δ_log)`, `(K, dist)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Setting {
    pub group: Group,
    pub metric: Metric,
}

impl Setting {
    pub fn new(group: Group, metric: Metric) -> Result<Self> {
        match (group, metric) {
            (_, Metric::Delta) | (Group::T, Metric::Log) | (Group::K, Metric::Euclid) => Ok(Self { group, metric }),
            _ => Err(Error::Precondition(format!("unsupported setting ({group}, {metric})"))),
        }
    }

    pub fn all() -> [Setting; 4] {
        [
            Setting { group: Group::T, metric: Metric::Delta },
            Setting { group: Group::K, metric: Metric::Delta },
            Setting { group: Group::T, metric: Metric::Log },
            Setting { group: Group::K, metric: Metric::Euclid },
        ]
    }
}

/// Pair of points whose orbit distance is asked for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RopTarget {
    Points { p: QuotientPoint, q: QuotientPoint },
    Vectors { v: Vec<GaussianRational>, w: Vec<GaussianRational> },
}

/// A robust orbit problem instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RopInstance {
    pub action: TorusAction,
    pub setting: Setting,
    pub target: RopTarget,
    /// Separation bound valid for this instance, when the setting needs one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sep: Option<SepBound>,
}

/// Solves an instance with the solver matching its setting. Vector settings
/// without a stored bound fall back to [`SepBound::default_for`].
pub fn solve_rop(inst: &RopInstance, backend: Backend) -> Result<RopAnswer> {
    match &inst.target {
        RopTarget::Points { p, q } => Ok(RopAnswer {
            estimate: rop_delta(&inst.action, p, q, inst.setting.group, backend)?,
            warnings: Vec::new(),
        }),
        RopTarget::Vectors { v, w } => {
            let sep = inst.sep.clone().unwrap_or_else(|| SepBound::default_for(&inst.action, v, w));
            match inst.setting.metric {
                Metric::Log => rop_logdist_t(&inst.action, v, w, &sep, backend),
                Metric::Euclid => rop_dist_k(&inst.action, v, w, &sep, backend),
                Metric::Delta => Err(Error::Precondition("Δ setting needs log-space points".into())),
            }
        }
    }
}

/// Converts an estimate for one distance into an estimate for another:
/// `D' = scale · D`, and the factor grows by `factor`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackMap {
    #[serde(with = "crate::exactlinalg::json::rat")]
    pub scale: BigRational,
    #[serde(with = "crate::exactlinalg::json::rat")]
    pub factor: BigRational,
}

impl BackMap {
    pub fn apply(&self, est: &DistanceEstimate) -> DistanceEstimate {
        DistanceEstimate {
            d: &est.d * &self.scale,
            gamma: &est.gamma * &self.factor,
            squared_exact: est.squared_exact.as_ref().map(|s| s * &self.scale * &self.scale),
        }
    }
}

/// Output of [`reduce_sldp_to_rop`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SldpToRop {
    pub instance: RopInstance,
    pub back_map: BackMap,
}

/// A rigorous lower bound on `dist(t + U, Z^n)`, or `None` when it is zero.
///
/// With `H` the invariant matrix of `U`, `dist(t + U, Z^n) >= dist(Ht, Z^k) / σ_max(H)`,
/// and a non-integral `Ht` with common denominator `q` is at least `1/q` from `Z^k`.
pub fn sldp_lower_bound(inst: &SldpInstance) -> Result<Option<BigRational>> {
    if affine_lattice_nonempty(&inst.t, &inst.u_basis)? {
        return Ok(None);
    }
    let h = kernel_lattice_basis(&inst.u_matrix());
    let ht = to_rat(&h).mul_vec(&inst.t)?;
    let q = BigRational::from_integer(common_denominator(&ht));
    let fro: BigRational = h.entries().iter().map(|x| BigRational::from_integer(x * x)).sum();
    Ok(Some((q * sqrt_upper(&fro, SQRT_BITS)).recip()))
}

/// Torus action whose weight rows span `U`; the zero row when `U = {0}`.
fn action_for(inst: &SldpInstance) -> Result<TorusAction> {
    if inst.u_basis.is_empty() {
        TorusAction::new(Matrix::zeros(1, inst.dim()))
    } else {
        TorusAction::new(inst.u_matrix())
    }
}

fn ones(n: usize) -> Vec<GaussianRational> {
    vec![GaussianRational::from_ints(1, 0); n]
}

/// Reduces SLDP for `(t, U)` to a robust orbit problem in the given setting.
///
/// `Δ` settings use `p = (0, t mod 1)` and `q = 0`, so the orbit distance is
/// `2π dist(t + U, Z^n)` exactly. Vector settings take `w = (1, ..., 1)` and
/// `v` within `κ = ε/18` of `Exp(2πit)`, where `ε <= 2π dist(t + U, Z^n)` is the
/// unconditional bound of [`sldp_lower_bound`]; the emitted instance carries a
/// separation bound derived from `ε`. When `t + U` meets `Z^n` the vector
/// settings get `v = w`.
pub fn reduce_sldp_to_rop(inst: &SldpInstance, setting: Setting) -> Result<SldpToRop> {
    let setting = Setting::new(setting.group, setting.metric)?;
    let n = inst.dim();
    let action = action_for(inst)?;
    let bits = DEFAULT_BITS;
    let pi_iv = pi(bits);
    let two = BigRational::from_integer(2.into());
    if setting.metric == Metric::Delta {
        let p = QuotientPoint::new(vec![BigRational::zero(); n], inst.t.clone())?;
        return Ok(SldpToRop {
            instance: RopInstance {
                action,
                setting,
                target: RopTarget::Points { p, q: QuotientPoint::zero(n) },
                sep: None,
            },
            back_map: BackMap {
                scale: (&two * &pi_iv.lo).recip(),
                factor: &pi_iv.hi / &pi_iv.lo,
            },
        });
    }
    let back_map = match setting.metric {
        Metric::Euclid => BackMap { scale: rat(9, 32), factor: two.clone() },
        _ => BackMap {
            scale: rat(17, 32) / &pi_iv.lo,
            factor: two.clone(),
        },
    };
    let Some(lower) = sldp_lower_bound(inst)? else {
        return Ok(SldpToRop {
            instance: RopInstance {
                action,
                setting,
                target: RopTarget::Vectors { v: ones(n), w: ones(n) },
                sep: None,
            },
            back_map,
        });
    };
    let eps = (&two * &pi_iv.lo * lower).min(BigRational::one());
    let kappa = &eps / BigRational::from_integer(18.into());
    let p = QuotientPoint::new(vec![BigRational::zero(); n], inst.t.clone())?;
    // Componentwise accuracy κ/n keeps the Euclidean error below κ.
    let v = exp_approx(&p, &(&kappa / BigRational::from_integer(n.max(1).into())))?;
    // The emitted pair is at least (16/17) ε apart in δ_log, and the Euclidean
    // distance is at least 2r/π times that with r >= 17/18.
    let sep = match setting.metric {
        Metric::Euclid => &eps * rat(16, 9) / &pi_iv.hi,
        _ => &eps * rat(16, 17),
    };
    Ok(SldpToRop {
        instance: RopInstance {
            action,
            setting,
            target: RopTarget::Vectors { v, w: ones(n) },
            sep: Some(SepBound::new(sep)?),
        },
        back_map,
    })
}

/// Output of [`cvp_to_rop_pipeline`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvpToRop {
    #[serde(with = "crate::exactlinalg::json::int")]
    pub s_total: BigInt,
    pub sldp: SldpInstance,
    pub rop: SldpToRop,
    /// Maps an ROP estimate straight to an estimate of `dist(t, L)`.
    pub back_map: BackMap,
}

/// CVP → SLDP by lattice lifting, then SLDP → ROP.
pub fn cvp_to_rop_pipeline(inst: &CvpInstance, setting: Setting) -> Result<CvpToRop> {
    let CvpReduction::Reduced { s_total, instance, .. } = cvp_to_sldp(inst, ReductionPolicy::default())? else {
        unreachable!("the default policy always reduces");
    };
    let rop = reduce_sldp_to_rop(&instance, setting)?;
    let back_map = BackMap {
        scale: &rop.back_map.scale * BigRational::from_integer(s_total.clone()),
        factor: rop.back_map.factor.clone(),
    };
    Ok(CvpToRop {
        s_total,
        sldp: instance,
        rop,
        back_map,
    })
}

/// Weight matrix with a single zero row, acting trivially on `C^n`.
pub fn trivial_action(n: usize) -> Result<TorusAction> {
    TorusAction::new(IntMatrix::zeros(1, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::gaussian::dist_sq;
    use crate::exactlinalg::matrix::int_matrix;
    use crate::lattices::{cvp_exact, sldp_exact};
    use num_traits::ToPrimitive;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn sep() -> SepBound {
        SepBound::new(pow2(-40)).unwrap()
    }

    fn f(x: &BigRational) -> f64 {
        x.to_f64().unwrap()
    }

    fn sandwiches(est: &DistanceEstimate, exact: f64) {
        let (d, gm) = (f(&est.d), f(&est.gamma));
        assert!(d >= exact * (1.0 - 1e-12) && d <= gm * exact * (1.0 + 1e-12), "{d} vs {exact} (γ = {gm})");
    }

    #[test]
    fn delta_trivial_and_inexact() {
        let a = TorusAction::from_rows(&[&[1, -1]]).unwrap();
        let p = QuotientPoint::new(vec![rat(1, 3), rat(0, 1)], vec![rat(1, 5), rat(2, 5)]).unwrap();
        assert_eq!(rop_delta(&a, &p, &p, Group::T, Backend::Exact).unwrap().d, BigRational::zero());
        let mut noisy = p.clone();
        noisy.err = rat(1, 1000);
        assert_eq!(rop_delta(&a, &noisy, &p, Group::T, Backend::Exact), Err(Error::InexactInput));
    }

    #[test]
    fn delta_imaginary_instance() {
        let a = TorusAction::from_rows(&[&[1, 1]]).unwrap();
        let p = QuotientPoint::new(vec![rat(0, 1); 2], vec![rat(1, 2), rat(0, 1)]).unwrap();
        for backend in [Backend::Exact, Backend::HBased, Backend::Lll] {
            let est = rop_delta(&a, &p, &QuotientPoint::zero(2), Group::T, backend).unwrap();
            let over_2pi = est.d.to_f64().unwrap() / (2.0 * std::f64::consts::PI);
            assert!(over_2pi >= 2f64.sqrt() / 4.0 - 1e-15);
            assert!(over_2pi <= f(&est.gamma) * 2f64.sqrt() / 4.0 + 1e-12);
        }
    }

    #[test]
    fn logdist_examples() {
        let a = TorusAction::from_rows(&[&[1, -1]]).unwrap();
        let half = GaussianRational::real(rat(1, 2));
        let r = rop_logdist_t(&a, &[g(1, 0), g(1, 0)], &[g(2, 0), half], &sep(), Backend::Exact).unwrap();
        assert_eq!(r.estimate.d, BigRational::zero());
        assert!(r.warnings.is_empty());
        let r = rop_logdist_t(&a, &[g(1, 0), g(1, 0)], &[g(2, 0), g(1, 0)], &sep(), Backend::Exact).unwrap();
        sandwiches(&r.estimate, std::f64::consts::LN_2 / 2f64.sqrt());
        let b = TorusAction::from_rows(&[&[1, 1]]).unwrap();
        let r = rop_logdist_t(&b, &[g(1, 0), g(2, 0)], &[g(2, 0), g(4, 0)], &sep(), Backend::Exact).unwrap();
        assert_eq!(r.estimate.d, BigRational::zero());
    }

    #[test]
    fn default_sep_warns() {
        let a = TorusAction::from_rows(&[&[1, -1]]).unwrap();
        let (v, w) = ([g(1, 0), g(1, 0)], [g(2, 0), g(1, 0)]);
        let s = SepBound::default_for(&a, &v, &w);
        assert!(s.assumed);
        let r = rop_logdist_t(&a, &v, &w, &s, Backend::Exact).unwrap();
        assert_eq!(r.warnings.len(), 1);
        sandwiches(&r.estimate, std::f64::consts::LN_2 / 2f64.sqrt());
    }

    #[test]
    fn dist_k_examples() {
        let a = TorusAction::from_rows(&[&[1]]).unwrap();
        assert_eq!(rop_dist_k(&a, &[g(1, 0)], &[g(0, 1)], &sep(), Backend::Exact).unwrap().estimate.d, BigRational::zero());
        let b = TorusAction::from_rows(&[&[1, 1]]).unwrap();
        let r = rop_dist_k(&b, &[g(1, 0), g(1, 0)], &[g(1, 0), g(-1, 0)], &sep(), Backend::Exact).unwrap();
        sandwiches(&r.estimate, 2f64.sqrt());
        let z = trivial_action(2).unwrap();
        let (v, w) = ([g(1, 2), g(3, -1)], [g(2, 2), g(1, 1)]);
        let r = rop_dist_k(&z, &v, &w, &sep(), Backend::Exact).unwrap();
        sandwiches(&r.estimate, f(&dist_sq(&v, &w)).sqrt());
    }

    #[test]
    fn witness_examples() {
        let a = TorusAction::from_rows(&[&[1, -1]]).unwrap();
        let half = GaussianRational::real(rat(1, 2));
        let out = rop_witness_t(&a, &[g(1, 0), g(1, 0)], &[g(2, 0), half], &sep(), Backend::Exact).unwrap();
        assert_eq!(out, WitnessOutcome::OrbitEqual);
        let ln2 = std::f64::consts::LN_2;
        // (1,1) vs (2,2): invariant x1 x2 differs; δ_log = |(log 2, log 2)| = √2 log 2.
        for (w, exact, y) in [([g(2, 0), g(2, 0)], 2f64.sqrt() * ln2, 0.0), ([g(4, 0), g(1, 0)], 2f64.sqrt() * ln2, ln2)] {
            let WitnessOutcome::Found { witness, estimate, residual } =
                rop_witness_t(&a, &[g(1, 0), g(1, 0)], &w, &sep(), Backend::Exact).unwrap()
            else {
                panic!("orbits differ");
            };
            sandwiches(&estimate.estimate, exact);
            assert!(f(&residual.upper()) <= f(&estimate.estimate.gamma) * exact);
            assert!(f(&residual.lower()) >= exact * (1.0 - 1e-9));
            assert!((f(&witness.y[0]) - y).abs() < 1e-9);
        }
    }

    fn round_trip(inst: &SldpInstance, exact_sq: &BigRational) {
        let exact = f(exact_sq).sqrt();
        for setting in Setting::all() {
            let red = reduce_sldp_to_rop(inst, setting).unwrap();
            let ans = solve_rop(&red.instance, Backend::Exact).unwrap();
            let back = red.back_map.apply(&ans.estimate);
            if exact_sq.is_zero() {
                assert!(back.d.is_zero(), "{setting:?}");
            } else {
                sandwiches(&back, exact);
            }
        }
    }

    #[test]
    fn sldp_round_trips() {
        let inst = SldpInstance::new(vec![rat(1, 2), rat(0, 1)], vec![vec![1.into(), 1.into()]]).unwrap();
        round_trip(&inst, &rat(1, 8));
        let inst = SldpInstance::new(vec![rat(2, 5), rat(3, 5)], vec![]).unwrap();
        round_trip(&inst, &rat(8, 25));
        let inst = SldpInstance::new(vec![rat(3, 1), rat(-1, 1)], vec![vec![1.into(), 2.into()]]).unwrap();
        round_trip(&inst, &rat(0, 1));
        let inst = SldpInstance::new(vec![rat(1, 3), rat(1, 7), rat(2, 9)], vec![vec![1.into(), (-2).into(), 1.into()]]).unwrap();
        round_trip(&inst, &sldp_exact(&inst).unwrap());
    }

    #[test]
    fn lower_bound_is_valid() {
        let inst = SldpInstance::new(vec![rat(1, 2), rat(0, 1)], vec![vec![1.into(), 1.into()]]).unwrap();
        let lb = sldp_lower_bound(&inst).unwrap().unwrap();
        assert!(&lb * &lb <= rat(1, 8));
    }

    #[test]
    fn cvp_pipeline() {
        for (g, t) in [
            (int_matrix(&[&[1]]), vec![rat(3, 10)]),
            (int_matrix(&[&[1]]), vec![rat(2, 1)]),
            (Matrix::identity(2), vec![rat(1, 2), rat(1, 2)]),
        ] {
            let inst = CvpInstance::new(g, t).unwrap();
            let exact_sq = cvp_exact(&inst).unwrap().dist_sq;
            for setting in [Setting::all()[0], Setting::all()[3]] {
                let red = cvp_to_rop_pipeline(&inst, setting).unwrap();
                let ans = solve_rop(&red.rop.instance, Backend::Exact).unwrap();
                let back = red.back_map.apply(&ans.estimate);
                if exact_sq.is_zero() {
                    assert!(back.d.is_zero());
                } else {
                    sandwiches(&back, f(&exact_sq).sqrt());
                }
            }
        }
    }
}

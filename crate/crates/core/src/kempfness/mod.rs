//! Kempf–Ness functions of torus actions and orbit equality through their minimizers.
//!
//! For weights `ω_i` (columns of `M`) and `q_i = |v_i|^2 > 0`,
//!
//! `f(x) = 2 log |e^(x/2) · v| = log Σ q_i e^(ω_i^T x)`.
//!
//! `f` is strictly convex when the weights affinely span `R^d`, and attains its
//! minimum exactly when the origin is interior to their convex hull. The
//! minimizer `x*` gives the critical point `e^(x*/2) · v` of the orbit.
//!
//! Only the gradient norm at the returned point is certified. Turning it into a
//! bound on `|x - x*|` uses the Hessian at `x` as a stand-in for the Hessian
//! along the segment to `x*`; [`small_hessian_family`] shows that this can be
//! far off, so every consumer reports the assumption.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::linalg::{check_positive_definite, solve};
use crate::exactlinalg::matrix::{dot, int_matrix, to_rat, Matrix, RatMatrix, RatVector};
use crate::exactlinalg::numeric::{pow2, sqrt_upper, SQRT_BITS};
use crate::exactlinalg::spectral::{eigen_bracket, singular_brackets};
use crate::exactlinalg::{Certified, GaussianRational};
use crate::lattices::{backend_gamma, max_enum_dim, Backend, DistanceEstimate};
use crate::logspace::real::{bits_for, exp, ln, ln2, Interval};
use crate::logspace::{delta_orbit_detailed, log_approx, Group, QuotientPoint};
use crate::rop::SepBound;
use crate::torus::{polytope_origin_position, weights_span_affinely, PolytopePosition, TorusAction};

const MAX_BITS: u64 = 1 << 15;
const MAX_ITERATIONS: usize = 500;

/// Kempf–Ness function of `v` under `action`, through `q_i = |v_i|^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnProblem {
    pub action: TorusAction,
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub q: RatVector,
}

impl KnProblem {
    pub fn new(action: TorusAction, q: RatVector) -> Result<Self> {
        if q.len() != action.n() {
            return Err(Error::DimensionMismatch(format!("{} moduli for {} weights", q.len(), action.n())));
        }
        if let Some(i) = q.iter().position(|x| !x.is_positive()) {
            return Err(Error::ZeroComponent { index: i });
        }
        if !weights_span_affinely(&action) {
            return Err(Error::Precondition("weights do not affinely span R^d".into()));
        }
        Ok(Self { action, q })
    }

    pub fn from_vector(action: TorusAction, v: &[GaussianRational]) -> Result<Self> {
        Self::new(action, v.iter().map(GaussianRational::norm_sq).collect())
    }

    pub fn d(&self) -> usize {
        self.action.d()
    }

    fn weights(&self) -> Vec<RatVector> {
        let m = to_rat(self.action.matrix());
        (0..self.action.n()).map(|j| m.col(j)).collect()
    }
}

/// Enclosures of `f`, `∇f` and (optionally) `∇²f` at one point.
struct Eval {
    f: Interval,
    grad: Vec<Interval>,
    hess: Vec<Vec<Interval>>,
}

fn ln_interval(x: &Interval, bits: u64) -> Interval {
    Interval::new(ln(&x.lo, bits).lo, ln(&x.hi, bits).hi)
}

fn exp_interval(x: &Interval, bits: u64) -> Interval {
    Interval::new(exp(&x.lo, bits).lo, exp(&x.hi, bits).hi)
}

/// Log-sum-exp with the largest exponent factored out, so every `exp` argument is `<= 0`.
fn evaluate(p: &KnProblem, x: &[BigRational], bits: u64, with_hessian: bool) -> Result<Eval> {
    let d = p.d();
    if x.len() != d {
        return Err(Error::DimensionMismatch(format!("point has {} entries, expected {d}", x.len())));
    }
    let weights = p.weights();
    let s: Vec<BigRational> = weights.iter().map(|w| dot(w, x)).collect();
    let c = s.iter().max().expect("at least one weight").clone();
    let keep = bits + 16;
    let terms: Vec<Interval> = s
        .iter()
        .zip(&p.q)
        .map(|(si, qi)| exp(&(si - &c), bits + 8).scale(qi).round(keep))
        .collect();
    let total = terms.iter().fold(Interval::from_int(0), |acc, t| acc.add(t));
    let f = ln_interval(&total, bits + 8).add_rat(&c);
    let inv = total.recip().round(keep);
    let weighted: Vec<Interval> = terms.iter().map(|t| t.mul(&inv).round(keep)).collect();
    let grad: Vec<Interval> = (0..d)
        .map(|j| {
            weights
                .iter()
                .zip(&weighted)
                .fold(Interval::from_int(0), |acc, (w, t)| acc.add(&t.scale(&w[j])))
        })
        .collect();
    let hess = if with_hessian {
        (0..d)
            .map(|j| {
                (0..d)
                    .map(|k| {
                        let second = weights
                            .iter()
                            .zip(&weighted)
                            .fold(Interval::from_int(0), |acc, (w, t)| acc.add(&t.scale(&(&w[j] * &w[k]))));
                        second.sub(&grad[j].mul(&grad[k])).round(keep)
                    })
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(Eval { f, grad, hess })
}

fn initial_bits(p: &KnProblem, eps: &BigRational) -> Result<u64> {
    if !eps.is_positive() {
        return Err(Error::NonPositivePrecision);
    }
    Ok(bits_for(eps) + 8 + (usize::BITS - p.action.n().leading_zeros()) as u64)
}

/// Re-evaluates with doubled precision until `done` accepts the enclosure.
fn refine_eval(p: &KnProblem, x: &[BigRational], eps: &BigRational, hess: bool, done: impl Fn(&Eval) -> bool) -> Result<Eval> {
    let mut bits = initial_bits(p, eps)?;
    loop {
        let ev = evaluate(p, x, bits, hess)?;
        if done(&ev) || bits > MAX_BITS {
            return Ok(ev);
        }
        bits *= 2;
    }
}

/// `f(x)` within `eps`.
pub fn kn_value(p: &KnProblem, x: &[BigRational], eps: &BigRational) -> Result<Certified> {
    let tol = eps * BigRational::from_integer(2.into());
    Ok(refine_eval(p, x, eps, false, |ev| ev.f.width() <= tol)?.f.to_certified())
}

/// `∇f(x)`, each entry within `eps`.
pub fn kn_gradient(p: &KnProblem, x: &[BigRational], eps: &BigRational) -> Result<Vec<Certified>> {
    let tol = eps * BigRational::from_integer(2.into());
    let ev = refine_eval(p, x, eps, false, |ev| ev.grad.iter().all(|g| g.width() <= tol))?;
    Ok(ev.grad.iter().map(Interval::to_certified).collect())
}

/// `∇²f(x)`, each entry within `eps`.
pub fn kn_hessian(p: &KnProblem, x: &[BigRational], eps: &BigRational) -> Result<Vec<Vec<Certified>>> {
    let tol = eps * BigRational::from_integer(2.into());
    let ev = refine_eval(p, x, eps, true, |ev| ev.hess.iter().flatten().all(|h| h.width() <= tol))?;
    Ok(ev.hess.iter().map(|row| row.iter().map(Interval::to_certified).collect()).collect())
}

/// Output of [`kn_minimize`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnSolution {
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub x: RatVector,
    /// Certified upper bound on `|∇f(x)|`.
    #[serde(with = "crate::exactlinalg::json::rat")]
    pub grad_norm: BigRational,
    pub f_value: Certified,
    pub iterations: usize,
    /// Working precision at termination.
    pub bits: u64,
    /// Midpoint values of `f` at the start and after each accepted step.
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub f_trace: RatVector,
}

fn round_dyadic(x: &BigRational, bits: u64) -> BigRational {
    let s = pow2(bits as i64);
    (x * &s).round() / s
}

fn norm_upper(v: &[Interval]) -> BigRational {
    let sq: BigRational = v.iter().map(|g| g.mag() * g.mag()).sum();
    sqrt_upper(&sq, SQRT_BITS)
}

fn mid_matrix(h: &[Vec<Interval>]) -> RatMatrix {
    Matrix::from_fn(h.len(), h.len(), |i, j| h[i][j].mid())
}

fn require_interior(action: &TorusAction) -> Result<()> {
    match polytope_origin_position(action)? {
        PolytopePosition::Interior => Ok(()),
        other => Err(Error::Infeasible(format!(
            "origin is not interior to the weight polytope ({other:?}); the infimum is not attained"
        ))),
    }
}

/// Damped Newton from `x = 0` with backtracking, until the certified gradient
/// norm is at most `tol`. Precision doubles whenever the enclosures are too wide
/// to make progress.
pub fn kn_minimize(p: &KnProblem, tol: &BigRational) -> Result<KnSolution> {
    require_interior(&p.action)?;
    let d = p.d();
    let mut bits = initial_bits(p, tol)?.max(64);
    let mut x = vec![BigRational::zero(); d];
    let mut trace = Vec::new();
    let armijo = BigRational::new(1.into(), 10_000.into());
    let half = BigRational::new(1.into(), 2.into());
    for iteration in 0..MAX_ITERATIONS {
        if bits > MAX_BITS {
            break;
        }
        let ev = evaluate(p, &x, bits, true)?;
        if trace.is_empty() {
            trace.push(ev.f.mid());
        }
        let grad_norm = norm_upper(&ev.grad);
        if &grad_norm <= tol {
            return Ok(KnSolution {
                x,
                grad_norm,
                f_value: ev.f.to_certified(),
                iterations: iteration,
                bits,
                f_trace: trace,
            });
        }
        let widest = ev.grad.iter().map(Interval::width).max().expect("d >= 1");
        if widest * BigRational::from_integer((4 * d).into()) > *tol {
            bits *= 2;
            continue;
        }
        let g: RatVector = ev.grad.iter().map(Interval::mid).collect();
        let Ok(step) = solve(&mid_matrix(&ev.hess), &g.iter().map(|v| -v).collect::<Vec<_>>()) else {
            bits *= 2;
            continue;
        };
        let slope = dot(&g, &step);
        let f0 = ev.f.mid();
        let mut t = BigRational::one();
        let mut accepted = None;
        for _ in 0..64 {
            let xn: RatVector = x.iter().zip(&step).map(|(a, s)| round_dyadic(&(a + &t * s), bits)).collect();
            if xn == x {
                break;
            }
            let fnew = evaluate(p, &xn, bits, false)?.f.mid();
            if fnew <= &f0 + &armijo * &t * &slope && fnew < f0 {
                accepted = Some((xn, fnew));
                break;
            }
            t *= &half;
        }
        match accepted {
            Some((xn, fnew)) => {
                x = xn;
                trace.push(fnew);
            }
            None => bits *= 2,
        }
    }
    Err(Error::Precondition(format!("Newton iteration did not reach gradient norm {tol}")))
}

/// Lower bound on the smallest Hessian eigenvalue at `x`, or zero if none is found.
fn hessian_floor(p: &KnProblem, x: &[BigRational], bits: u64) -> Result<BigRational> {
    let ev = evaluate(p, x, bits, true)?;
    let mid = mid_matrix(&ev.hess);
    if check_positive_definite(&mid).is_err() {
        return Ok(BigRational::zero());
    }
    let (lo, _) = eigen_bracket(&mid, 0, &BigRational::new(1.into(), 4.into()));
    let widest = ev.hess.iter().flatten().map(Interval::width).max().unwrap_or_default();
    let floor = lo - widest * BigRational::from_integer(p.d().into());
    Ok(floor.max(BigRational::zero()))
}

/// Minimizer with `2 |∇f(x)| / λ_min(∇²f(x)) <= radius`, and that ratio.
fn minimize_within(p: &KnProblem, radius: &BigRational) -> Result<(KnSolution, BigRational)> {
    let mut tol = radius.clone();
    for _ in 0..8 {
        let sol = kn_minimize(p, &tol)?;
        let mu = hessian_floor(p, &sol.x, sol.bits)?;
        if mu.is_positive() {
            let bound = &sol.grad_norm * BigRational::from_integer(2.into()) / &mu;
            if &bound <= radius {
                return Ok((sol, bound));
            }
            tol = &mu * radius / BigRational::from_integer(4.into());
        } else {
            tol *= pow2(-16);
        }
    }
    Err(Error::Precondition("could not bound the distance to the minimizer".into()))
}

/// Outcome of [`kn_orbit_equal`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnOrbitEquality {
    pub equal: bool,
    /// Estimate of `δ_log` between the compact orbits of the two critical points.
    pub estimate: DistanceEstimate,
    #[serde(with = "crate::exactlinalg::json::rat")]
    pub eps: BigRational,
    /// `equal` iff `D < threshold`.
    #[serde(with = "crate::exactlinalg::json::rat")]
    pub threshold: BigRational,
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub x: RatVector,
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub y: RatVector,
    /// Assumed bound on the distance of `x` and `y` to the true minimizers.
    #[serde(with = "crate::exactlinalg::json::rat")]
    pub minimizer_radius: BigRational,
    pub warnings: Vec<String>,
}

/// Upper bound on the spectral norm of `M`, at least 1.
fn weight_norm(action: &TorusAction) -> BigRational {
    let fro: BigRational = action
        .matrix()
        .entries()
        .iter()
        .map(|x| BigRational::from_integer(x * x))
        .sum();
    sqrt_upper(&fro, SQRT_BITS).max(BigRational::one())
}

/// Decides `O_v = O_w` by comparing the compact orbits of the Kempf–Ness critical points.
///
/// With `γ` the backend's factor and `ε = sep / (2γ)`, both minimizers are located
/// within `ε / (2|M|)`, which moves each critical point by at most `ε/4` in log
/// distance. Equal orbits then give `D < γε/2 + slack` and distinct ones `D > 3γε/2`,
/// so the test is `D < γε`.
pub fn kn_orbit_equal(
    action: &TorusAction,
    v: &[GaussianRational],
    w: &[GaussianRational],
    sep: &SepBound,
    backend: Backend,
) -> Result<KnOrbitEquality> {
    require_interior(action)?;
    let pv = KnProblem::from_vector(action.clone(), v)?;
    let pw = KnProblem::from_vector(action.clone(), w)?;
    let slack = BigRational::one() + pow2(-60);
    let gamma = backend_gamma(&action.u_basis(), action.n(), backend)? * slack;
    let two = BigRational::from_integer(2.into());
    let eps = sep.eps() / (&two * &gamma);
    let radius = &eps / (&two * weight_norm(action));
    let (sx, bx) = minimize_within(&pv, &radius)?;
    let (sy, by) = minimize_within(&pw, &radius)?;
    let log_eps = &gamma * &eps / (BigRational::from_integer(8.into()) * (&gamma + BigRational::one()));
    let half_x: RatVector = sx.x.iter().map(|a| a / &two).collect();
    let half_y: RatVector = sy.x.iter().map(|a| a / &two).collect();
    let zero = vec![BigRational::zero(); action.d()];
    let p = log_approx(v, &(&log_eps / &two))?.translate(action, &half_x, &zero)?;
    let q = log_approx(w, &(&log_eps / &two))?.translate(action, &half_y, &zero)?;
    let detail = delta_orbit_detailed(action, &p, &q, Group::K, backend, max_enum_dim())?;
    let d = &detail.estimate.d + &p.err + &q.err;
    let threshold = &gamma * &eps;
    let mut warnings: Vec<String> = sep.warning().into_iter().collect();
    warnings.push(
        "distance to the minimizers is bounded by 2|grad f|/lambda_min(Hessian) at the returned point, assuming the Hessian does not drop along the segment".into(),
    );
    Ok(KnOrbitEquality {
        equal: d < threshold,
        estimate: DistanceEstimate {
            d,
            gamma: detail.estimate.gamma,
            squared_exact: None,
        },
        eps,
        threshold,
        x: sx.x,
        y: sy.x,
        minimizer_radius: bx.max(by),
        warnings,
    })
}

/// One inequality of [`SmallHessianReport`]: `lower < value < upper` for the
/// bounds that are present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub value: Certified,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<Certified>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Certified>,
    pub holds: bool,
}

impl BoundCheck {
    fn new(value: &Interval, lower: Option<&Interval>, upper: Option<&Interval>) -> Self {
        let above = lower.is_none_or(|l| value.lo > l.hi);
        let below = upper.is_none_or(|u| value.hi < u.lo);
        Self {
            value: value.to_certified(),
            lower: lower.map(Interval::to_certified),
            upper: upper.map(Interval::to_certified),
            holds: above && below,
        }
    }
}

/// Report on the family with weights `(1,0), (-2,0), (-N,1), (-N,-1)`, where
/// `f` is almost flat in the second coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallHessianReport {
    #[serde(rename = "N")]
    pub n: u64,
    /// Minimizer for `v = (1,1,1,1)`.
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub x_star: RatVector,
    /// Minimizer for `w = (1,1,2,2)`.
    #[serde(with = "crate::exactlinalg::json::rat_vec")]
    pub y_star: RatVector,
    /// `2^(1/3) < e^(x1*) < (1 + N 2^(-N/3)) 2^(1/3)`.
    pub minimizer_bracket: BoundCheck,
    /// `|x2*|` is negligible.
    pub second_coordinate: BoundCheck,
    /// `0 < f(x1*, 1) - f(x1*, 0) < 2^(-N/3) (e + 1/e - 2)`.
    pub gap: BoundCheck,
    /// `|(x1*, 1) - x*| = 1`.
    pub distance_to_minimizer: BoundCheck,
    /// `|v* - w*| < 2^(7/3) ε_N` with `ε_N = 2N 2^(-N/3)` and `v* = e^(x*/2) · v`.
    pub euclidean_upper: BoundCheck,
    /// `Δ(H Log v, H Log w) / σ_max(H) > log 2 / (2N)` for `H = [[2,1,0,0],[2N,0,1,1]]`.
    pub log_lower: BoundCheck,
    /// The compact orbits of the critical points are at least `log 2 / (2N)` apart in `δ_log`.
    pub critical_log_distance: BoundCheck,
    pub all_hold: bool,
    pub notes: Vec<String>,
}

fn rat_interval(x: &BigRational) -> Interval {
    Interval::point(x.clone())
}

/// Stress family with `|x - x*| = 1` but `f(x) - f*` exponentially small in `N`.
pub fn small_hessian_family(n: u64) -> Result<SmallHessianReport> {
    if n <= 2 {
        return Err(Error::Precondition("N must exceed 2".into()));
    }
    let ni = n as i64;
    let action = TorusAction::new(int_matrix(&[&[1, -2, -ni, -ni], &[0, 0, 1, -1]]))?;
    let one = GaussianRational::from_ints(1, 0);
    let two_g = GaussianRational::from_ints(2, 0);
    let v = vec![one.clone(), one.clone(), one.clone(), one.clone()];
    let w = vec![one.clone(), one, two_g.clone(), two_g];
    let pv = KnProblem::from_vector(action.clone(), &v)?;
    let pw = KnProblem::from_vector(action.clone(), &w)?;
    let tol = pow2(-80);
    let sv = kn_minimize(&pv, &tol)?;
    let sw = kn_minimize(&pw, &tol)?;
    let bits = 128;
    let nr = BigRational::from_integer(n.into());
    let third = BigRational::new(1.into(), 3.into());
    let cbrt2 = exp_interval(&ln2(bits).scale(&third), bits);
    // 2^(-N/3)
    let two_pow = exp_interval(&ln2(bits).scale(&(-&nr * &third)), bits);

    let x1 = &sv.x[0];
    let e_x1 = exp(x1, bits);
    let upper = two_pow.scale(&nr).add_rat(&BigRational::one()).mul(&cbrt2);
    let minimizer_bracket = BoundCheck::new(&e_x1, Some(&cbrt2), Some(&upper));

    let small = rat_interval(&pow2(-40));
    let second_coordinate = BoundCheck::new(&rat_interval(&sv.x[1].abs()), None, Some(&small));

    let eps = pow2(-(bits as i64));
    let f1 = kn_value(&pv, &[x1.clone(), BigRational::one()], &eps)?;
    let f0 = kn_value(&pv, &[x1.clone(), BigRational::zero()], &eps)?;
    let gap = Interval::from_certified(&f1.sub(&f0));
    let e = exp(&BigRational::one(), bits);
    let bound = e.add(&e.recip()).add_rat(&BigRational::from_integer((-2).into())).mul(&two_pow);
    let gap = BoundCheck::new(&gap, Some(&Interval::from_int(0)), Some(&bound));

    let dist = rat_interval(&(BigRational::one() - &sv.x[1]).abs());
    let tight = pow2(-40);
    let distance_to_minimizer = BoundCheck::new(
        &dist,
        Some(&rat_interval(&(BigRational::one() - &tight))),
        Some(&rat_interval(&(BigRational::one() + &tight))),
    );

    // Critical points e^(x*/2) · v, coordinatewise exp((ω_i^T x*) / 2) |v_i|.
    let m = to_rat(action.matrix());
    let crit = |x: &[BigRational], moduli: &[i64]| -> Vec<Interval> {
        (0..4)
            .map(|j| {
                let s: BigRational = (0..2).map(|i| &m[(i, j)] * &x[i]).sum::<BigRational>() / BigRational::from_integer(2.into());
                exp(&s, bits).scale(&BigRational::from_integer(moduli[j].into()))
            })
            .collect()
    };
    let vs = crit(&sv.x, &[1, 1, 1, 1]);
    let ws = crit(&sw.x, &[1, 1, 2, 2]);
    let sq = vs.iter().zip(&ws).fold(Interval::from_int(0), |acc, (a, b)| acc.add(&a.sub(b).sqr()));
    let euclid = sq.sqrt(bits);
    // 2^(7/3) ε_N = 2^(7/3) · 2N · 2^(-N/3)
    let seven_thirds = exp_interval(&ln2(bits).scale(&BigRational::new(7.into(), 3.into())), bits);
    let euclid_bound = seven_thirds.mul(&two_pow).scale(&(BigRational::from_integer(2.into()) * &nr));
    let euclidean_upper = BoundCheck::new(&euclid, None, Some(&euclid_bound));

    let h = int_matrix(&[&[2, 1, 0, 0], &[2 * ni, 0, 1, 1]]);
    let (_, _, _, smax_hi) = singular_brackets(&h, &pow2(-20))?;
    // H Log v = 0 and H Log w = (0, 2 log 2), so Δ = 2 log 2.
    let lhs = ln2(bits).scale(&(BigRational::from_integer(2.into()) / &smax_hi));
    let target = ln2(bits).scale(&(BigRational::one() / (BigRational::from_integer(2.into()) * &nr)));
    let log_lower = BoundCheck::new(&lhs, Some(&target), None);

    let zero = vec![BigRational::zero(); 2];
    let half = |x: &[BigRational]| -> RatVector { x.iter().map(|a| a / BigRational::from_integer(2.into())).collect() };
    let p = QuotientPoint::zero(4).translate(&action, &half(&sv.x), &zero)?;
    let lw = log_approx(&w, &pow2(-100))?;
    let q = lw.translate(&action, &half(&sw.x), &zero)?;
    let detail = delta_orbit_detailed(&action, &p, &q, Group::K, Backend::Exact, max_enum_dim())?;
    let est = &detail.estimate;
    let lo = (&est.d / &est.gamma - &q.err).max(BigRational::zero());
    let critical = Interval::new(lo, &est.d + &q.err);
    let critical_log_distance = BoundCheck::new(&critical, Some(&target), None);

    let all_hold = [
        &minimizer_bracket,
        &second_coordinate,
        &gap,
        &distance_to_minimizer,
        &euclidean_upper,
        &log_lower,
        &critical_log_distance,
    ]
    .iter()
    .all(|c| c.holds);
    let notes = vec![
        "minimizers are certified only through the gradient norm; x* is not certified".to_string(),
        format!(
            "f(x*) ≈ {:.6}, |grad f(x*)| <= {:.3e}",
            sv.f_value.value.to_f64().unwrap_or(f64::NAN),
            sv.grad_norm.to_f64().unwrap_or(f64::NAN)
        ),
    ];
    Ok(SmallHessianReport {
        n,
        x_star: sv.x,
        y_star: sw.x,
        minimizer_bracket,
        second_coordinate,
        gap,
        distance_to_minimizer,
        euclidean_upper,
        log_lower,
        critical_log_distance,
        all_hold,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::matrix::rat;
    use crate::torus::orbit_equal_t;

    fn f(x: &BigRational) -> f64 {
        x.to_f64().unwrap()
    }

    fn sym() -> KnProblem {
        KnProblem::new(TorusAction::from_rows(&[&[1, -1]]).unwrap(), vec![rat(1, 1), rat(1, 1)]).unwrap()
    }

    #[test]
    fn value_at_symmetric_point() {
        let v = kn_value(&sym(), &[rat(0, 1)], &pow2(-60)).unwrap();
        assert!(v.contains(&v.value));
        assert!((f(&v.value) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(v.err <= pow2(-60));
        let g = kn_gradient(&sym(), &[rat(0, 1)], &pow2(-60)).unwrap();
        assert!(g[0].contains(&rat(0, 1)));
        let h = kn_hessian(&sym(), &[rat(0, 1)], &pow2(-60)).unwrap();
        assert!(h[0][0].contains(&rat(1, 1)));
    }

    #[test]
    fn rejects_flat_weights() {
        let a = TorusAction::from_rows(&[&[1, 1]]).unwrap();
        assert!(KnProblem::new(a, vec![rat(1, 1), rat(1, 1)]).is_err());
    }

    #[test]
    fn minimize_symmetric() {
        let s = kn_minimize(&sym(), &pow2(-40)).unwrap();
        assert!(f(&s.x[0]).abs() < 1e-12);
        assert!(s.grad_norm <= pow2(-40));
    }

    #[test]
    fn minimize_requires_interior_origin() {
        let a = TorusAction::from_rows(&[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        let p = KnProblem::new(a, vec![rat(1, 1); 3]).unwrap();
        assert!(matches!(kn_minimize(&p, &pow2(-10)), Err(Error::Infeasible(_))));
    }

    #[test]
    fn minimize_trace_decreases() {
        let a = TorusAction::from_rows(&[&[1, -2, -9, -9], &[0, 0, 1, -1]]).unwrap();
        let p = KnProblem::new(a, vec![rat(3, 1), rat(1, 2), rat(5, 1), rat(1, 7)]).unwrap();
        let s = kn_minimize(&p, &pow2(-50)).unwrap();
        assert!(s.f_trace.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn orbit_equality_examples() {
        let a = TorusAction::from_rows(&[&[1, -1]]).unwrap();
        let sep = SepBound::new(pow2(-20)).unwrap();
        let g = |re: i64| GaussianRational::from_ints(re, 0);
        let half = GaussianRational::real(rat(1, 2));
        let cases = [
            (vec![g(1), g(1)], vec![g(1), g(1)]),
            (vec![g(1), g(1)], vec![g(2), half]),
            (vec![g(1), g(1)], vec![g(2), g(1)]),
        ];
        for (v, w) in cases {
            let r = kn_orbit_equal(&a, &v, &w, &sep, Backend::Exact).unwrap();
            assert_eq!(r.equal, orbit_equal_t(&a, &v, &w).unwrap(), "{v:?} {w:?}");
        }
    }

    #[test]
    fn small_hessian_family_checks() {
        for n in [3, 9, 30] {
            let r = small_hessian_family(n).unwrap();
            assert!(r.all_hold, "N = {n}: {r:#?}");
        }
        assert!(small_hessian_family(2).is_err());
    }
}
